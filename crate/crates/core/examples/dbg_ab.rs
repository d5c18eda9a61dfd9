// scratch: A/B pruning variants via env switches baked as const
use prl_core::env::hexapod::{GaitConfig, HexapodEnv};
use prl_core::learner::{init_controller, Learner};
use prl_core::params::LearnerParams;
use prl_core::rng::{stream, STREAM_ENV, STREAM_FILL, STREAM_GUESS};

fn main() {
    let params = LearnerParams::gait();
    let mut lates = Vec::new();
    for seed in 0..10u64 {
        let config = GaitConfig::default();
        let n_f = config.n_features();
        let mut env = HexapodEnv::new(config, stream(seed, STREAM_ENV));
        let controller = init_controller(n_f, &[2; 6], &params).unwrap();
        let mut learner = Learner::new(
            controller, params.clone(), vec![2; 6],
            stream(seed, STREAM_GUESS), stream(seed, STREAM_FILL),
        );
        let logs = learner.run_session(&mut env, 5000);
        let late: f64 = logs[4000..].iter().map(|l| l.reward).sum::<f64>() / 1000.0;
        let at1000: f64 = logs[900..1000].iter().map(|l| l.reward).sum::<f64>() / 100.0;
        print!("s{seed}:{late:.1}/{at1000:.0} ");
        lates.push(late);
    }
    println!();
    println!("grand mean: {:.2}, min {:.2}", lates.iter().sum::<f64>() / 10.0, lates.iter().cloned().fold(f64::INFINITY, f64::min));
}
