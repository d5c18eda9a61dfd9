// scratch: what does creation-error pruning delete?
use prl_core::env::hexapod::{GaitConfig, HexapodEnv};
use prl_core::env::Environment;
use prl_core::learner::{init_controller, Learner};
use prl_core::params::LearnerParams;
use prl_core::rng::{stream, STREAM_ENV, STREAM_FILL, STREAM_GUESS};

fn main() {
    let params = LearnerParams::gait();
    let seed = 9u64;
    let config = GaitConfig::default();
    let n_f = config.n_features();
    let mut env = HexapodEnv::new(config, stream(seed, STREAM_ENV));
    let controller = init_controller(n_f, &[2; 6], &params).unwrap();
    let mut learner = Learner::new(
        controller, params.clone(), vec![2; 6],
        stream(seed, STREAM_GUESS), stream(seed, STREAM_FILL),
    );
    let obs = env.reset();
    learner.reset(&obs);
    // Snapshot ids of confident, heavily used rules each 500 steps and see
    // whether they survive the next window.
    let mut watch: Vec<u64> = Vec::new();
    for step in 1..=5000usize {
        learner.run_step(&mut env);
        if step % 500 == 0 {
            let c = learner.controller();
            let gone = watch.iter().filter(|&&id| !c.contains(id)).count();
            let kept = watch.len() - gone;
            println!(
                "step {step}: of {} watched veteran rules, {kept} kept, {gone} deleted",
                watch.len()
            );
            watch = c
                .iter()
                .filter(|r| r.stats.i >= 22 && r.stats.used_count >= 30 && r.parents.is_some())
                .map(|r| r.id)
                .collect();
            println!(
                "  now watching {} confident well-used composed rules (|C|={})",
                watch.len(),
                c.len()
            );
        }
    }
}
