// scratch: inspect seed-9 policy over the degraded stretch
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
    let mut hist = std::collections::BTreeMap::<String, (usize, f64)>::new();
    for step in 1..=5000usize {
        let action = learner.act();
        let out = env.step(&action);
        let log = learner.observe(&action, out.reward, &out.observation, out.terminal);
        if (3800..4200).contains(&step) {
            let key: String = action.values.iter().map(|v| char::from(b'0' + *v as u8)).collect();
            let e = hist.entry(key).or_insert((0, 0.0));
            e.0 += 1;
            e.1 += log.reward;
        }
    }
    let mut rows: Vec<_> = hist.into_iter().collect();
    rows.sort_by_key(|(_, (n, _))| std::cmp::Reverse(*n));
    for (action, (n, total)) in rows.iter().take(12) {
        println!("action {action}: {n} times, mean reward {:.1}", total / *n as f64);
    }
}
