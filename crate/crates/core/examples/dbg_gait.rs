// scratch: gait learning probe
use prl_core::env::hexapod::{GaitConfig, HexapodEnv};
use prl_core::learner::{init_controller, Learner};
use prl_core::params::LearnerParams;
use prl_core::rng::{stream, STREAM_ENV, STREAM_FILL, STREAM_GUESS};
use std::time::Instant;

fn main() {
    let params = LearnerParams::gait();
    let seeds: Vec<u64> = std::env::args().nth(1).map(|s| s.parse().unwrap()).map(|n: u64| (0..n).collect()).unwrap_or_else(|| vec![0, 1]);
    for seed in seeds {
        let t0 = Instant::now();
        let config = GaitConfig::default();
        let n_f = config.n_features();
        let mut env = HexapodEnv::new(config, stream(seed, STREAM_ENV));
        let controller = init_controller(n_f, &[2; 6], &params).unwrap();
        let mut learner = Learner::new(
            controller,
            params.clone(),
            vec![2; 6],
            stream(seed, STREAM_GUESS),
            stream(seed, STREAM_FILL),
        );
        let logs = learner.run_session(&mut env, 5000);
        let rewards: Vec<f64> = logs.iter().map(|l| l.reward).collect();
        let smooth = |t: usize| -> f64 {
            let lo = t.saturating_sub(99);
            rewards[lo..=t].iter().sum::<f64>() / (t - lo + 1) as f64
        };
        let late: f64 = rewards[4000..].iter().sum::<f64>() / 1000.0;
        let windows: Vec<f64> = [500, 999, 2000, 3000, 4000, 4999].iter().map(|&t| smooth(t)).collect();
        let falls = rewards.iter().filter(|&&r| r < 0.0).count();
        println!(
            "seed {seed}: smoothed@[500,1000,2000,3000,4000,5000]={windows:.1?} late_mean={late:.2} falls={falls} rules={} elapsed={:.1}s",
            learner.controller().len(),
            t0.elapsed().as_secs_f64()
        );
    }
}
