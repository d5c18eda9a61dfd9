// scratch: probe criteria 7 (18 features + qlearning), 9 (ablation), 10 (warm start)
use prl_core::env::hexapod::{GaitConfig, HexapodEnv};
use prl_core::env::Environment;
use prl_core::learner::{init_controller, Learner};
use prl_core::params::LearnerParams;
use prl_core::qlearning::{QTable, RateSchedule};
use prl_core::rng::*;
use prl_core::textio;

fn gait_run(seed: u64, extra: usize, generation: bool, warm: Option<&str>) -> Vec<f64> {
    let params = LearnerParams::gait();
    let config = GaitConfig { extra_features: extra, ..GaitConfig::default() };
    let n_f = config.n_features();
    let mut env = HexapodEnv::new(config, stream(seed, STREAM_ENV));
    let controller = match warm {
        Some(text) => {
            let mut c = textio::load_controller(text, params.mu).unwrap();
            c.reset_statistics();
            c
        }
        None => init_controller(n_f, &[2; 6], &params).unwrap(),
    };
    let mut learner = Learner::new(controller, params.clone(), vec![2; 6],
        stream(seed, STREAM_GUESS), stream(seed, STREAM_FILL));
    learner.set_rule_generation(generation);
    let logs = learner.run_session(&mut env, 5000);
    if seed == 0 && generation && warm.is_none() && extra == 0 {
        std::fs::write("/tmp/donor_rules.txt", textio::render_controller(learner.controller())).unwrap();
    }
    logs.iter().map(|l| l.reward).collect()
}

fn late(r: &[f64]) -> f64 { r[4000..].iter().sum::<f64>() / 1000.0 }
fn crossing(r: &[f64], level: f64) -> usize {
    let mut s = 0.0;
    let mut window = std::collections::VecDeque::new();
    for (t, &x) in r.iter().enumerate() {
        window.push_back(x); s += x;
        if window.len() > 100 { s -= window.pop_front().unwrap(); }
        if s / window.len() as f64 >= level && window.len() == 100 { return t + 1; }
    }
    r.len() + 1
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "c7" => {
            let mut lates = Vec::new();
            for seed in 0..10u64 {
                let r = gait_run(seed, 6, true, None);
                lates.push(late(&r));
                print!("s{seed}:{:.1} ", lates.last().unwrap());
            }
            println!("\npartial 18-feature grand mean: {:.2}", lates.iter().sum::<f64>() / 10.0);
            // Q-learning on 18 features
            let mut qlates = Vec::new();
            for seed in 0..10u64 {
                let config = GaitConfig { extra_features: 6, ..GaitConfig::default() };
                let mut env = HexapodEnv::new(config, stream(seed, STREAM_ENV));
                let mut table = QTable::new(18, &[2; 6], RateSchedule::Constant(0.5), 0.2, 0.1);
                let mut rng = stream(seed, STREAM_EXPLORE);
                let mut obs = env.reset();
                let mut rewards = Vec::with_capacity(5000);
                for _ in 0..5000 {
                    let a = table.select(&obs, &mut rng);
                    let out = env.step(&a);
                    let s = table.state_index(&obs);
                    let s2 = table.state_index(&out.observation);
                    table.update(s, table.action_index(&a), out.reward, s2, out.terminal);
                    obs = out.observation;
                    rewards.push(out.reward);
                }
                qlates.push(late(&rewards));
            }
            println!("qlearning 18-feature grand mean late: {:.2}", qlates.iter().sum::<f64>() / 10.0);
        }
        "c9" => {
            let mut lates = Vec::new();
            for seed in 0..10u64 {
                let r = gait_run(seed, 0, false, None);
                lates.push(late(&r));
                print!("s{seed}:{:.1} ", lates.last().unwrap());
            }
            println!("\nablation grand mean: {:.2}", lates.iter().sum::<f64>() / 10.0);
        }
        "c10" => {
            // donor from seed 0 cold
            gait_run(0, 0, true, None);
            let donor = std::fs::read_to_string("/tmp/donor_rules.txt").unwrap();
            let mut cold_cross = Vec::new();
            let mut warm_cross = Vec::new();
            for seed in 0..10u64 {
                let c = gait_run(seed + 100, 0, true, None);
                let w = gait_run(seed + 100, 0, true, Some(&donor));
                cold_cross.push(crossing(&c, 15.0));
                warm_cross.push(crossing(&w, 15.0));
                print!("s{}: cold {} warm {} | ", seed + 100, cold_cross.last().unwrap(), warm_cross.last().unwrap());
            }
            let med = |v: &mut Vec<usize>| { v.sort(); (v[4] + v[5]) as f64 / 2.0 };
            let (mut c, mut w) = (cold_cross.clone(), warm_cross.clone());
            println!("\nmedian cold {} warm {} ratio {:.2}", med(&mut c), med(&mut w), med(&mut warm_cross.clone()) / med(&mut cold_cross.clone()));
        }
        _ => println!("usage: c7|c9|c10"),
    }
}
