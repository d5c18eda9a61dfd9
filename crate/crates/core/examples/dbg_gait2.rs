// scratch: gait management churn probe
use prl_core::env::hexapod::{GaitConfig, HexapodEnv};
use prl_core::learner::{init_controller, Learner};
use prl_core::params::LearnerParams;
use prl_core::rng::{stream, STREAM_ENV, STREAM_FILL, STREAM_GUESS};

fn main() {
    let params = LearnerParams::gait();
    for seed in [3u64, 9] {
        let config = GaitConfig::default();
        let n_f = config.n_features();
        let mut env = HexapodEnv::new(config, stream(seed, STREAM_ENV));
        let controller = init_controller(n_f, &[2; 6], &params).unwrap();
        let mut learner = Learner::new(
            controller, params.clone(), vec![2; 6],
            stream(seed, STREAM_GUESS), stream(seed, STREAM_FILL),
        );
        use prl_core::env::Environment;
        let obs = env.reset();
        learner.reset(&obs);
        let mut window_created = 0usize;
        let mut window_pruned = 0usize;
        let mut window_triggers = 0usize;
        let mut window_reward = 0.0;
        for step in 1..=5000usize {
            let log = learner.run_step(&mut env);
            window_created += log.created;
            window_pruned += log.pruned;
            window_triggers += (log.created > 0 || log.pruned > 0) as usize;
            window_reward += log.reward;
            if step % 1000 == 0 {
                let c = learner.controller();
                let ebar = c.global_error();
                let max_order = c.iter().map(|r| r.order()).max().unwrap();
                let confident = c.iter().filter(|r| r.stats.i >= 22).count();
                println!(
                    "seed {seed} step {step}: mean_r={:.1} triggers={window_triggers} created={window_created} pruned={window_pruned} ebar={ebar:.2} max_order={max_order} confident={confident}",
                    window_reward / 1000.0
                );
                window_created = 0; window_pruned = 0; window_triggers = 0; window_reward = 0.0;
            }
        }
    }
}
