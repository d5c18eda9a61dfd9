// scratch: navigation learning curve probe
use prl_core::env::nav::{NavEnv, NavMap};
use prl_core::env::Environment;
use prl_core::learner::{init_controller, Learner};
use prl_core::params::LearnerParams;
use prl_core::rng::{stream, STREAM_ENV, STREAM_FILL, STREAM_GUESS};

fn main() {
    let params = LearnerParams::navigation();
    let mut all_late = Vec::new();
    for seed in 0..10u64 {
        let map = NavMap::builtin();
        let mut env = NavEnv::new(map, stream(seed, STREAM_ENV));
        let controller = init_controller(10, &[3, 3], &params).unwrap();
        let mut learner = Learner::new(
            controller,
            params.clone(),
            vec![3, 3],
            stream(seed, STREAM_GUESS),
            stream(seed, STREAM_FILL),
        );
        let mut steps_per_trial = Vec::new();
        for _trial in 0..100 {
            let summary = learner.run_episode(&mut env, 150);
            steps_per_trial.push(summary.steps as f64);
        }
        let early: f64 = steps_per_trial[..40].iter().sum::<f64>() / 40.0;
        let late: f64 = steps_per_trial[40..].iter().sum::<f64>() / 60.0;
        println!(
            "seed {seed}: early mean {early:.2}, late mean {late:.2}, rules {}",
            learner.controller().len()
        );
        all_late.push(late);
    }
    let grand: f64 = all_late.iter().sum::<f64>() / all_late.len() as f64;
    println!("grand late mean (trials 41-100 over 10 seeds): {grand:.3}");
}
