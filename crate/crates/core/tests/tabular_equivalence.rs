//! With a controller holding only complete rules (full view, full command),
//! the rule machinery must collapse to per-cell tabular learning: the winner
//! for (state, action) is that cell's unique complete rule, and every
//! statistics update matches a flat array implementation of the same update
//! equations, update for update.

use prl_core::controller::Controller;
use prl_core::learner::Learner;
use prl_core::params::LearnerParams;
use prl_core::rng::{stream, STREAM_FILL, STREAM_GUESS};
use prl_core::types::{FullAction, Observation};
use rand::Rng;

const BETA: f64 = 0.99;
const ETA: i64 = 5;
const ALPHA: f64 = 0.1;

/// Hand-rolled tabular learner over a 2-state, 2-action MDP plus one global
/// cell standing in for the always-active unconditional rule. Written
/// against flat arrays, independent of the rule machinery.
struct TabularOracle {
    gamma: f64,
    q: [[f64; 2]; 2],
    e: [[f64; 2]; 2],
    i: [[i64; 2]; 2],
    global_q: f64,
    global_e: f64,
    global_i: i64,
    e_bar: f64,
}

impl TabularOracle {
    fn new(gamma: f64) -> Self {
        Self {
            gamma,
            q: [[0.0; 2]; 2],
            e: [[0.0; 2]; 2],
            i: [[0; 2]; 2],
            global_q: 0.0,
            global_e: 0.0,
            global_i: 0,
            e_bar: 0.0,
        }
    }

    fn confidence(i: i64) -> f64 {
        if i <= 0 {
            0.0
        } else if i >= ETA {
            BETA
        } else {
            let x = i as f64 / ETA as f64;
            BETA * x * x * (3.0 - 2.0 * x)
        }
    }

    fn epsilon(&self, e: f64, i: i64) -> f64 {
        let c = Self::confidence(i);
        e * c + self.e_bar * (1.0 - c)
    }

    /// Winner value for (s, a): the cell unless the global estimate is
    /// strictly more relevant (ties go to the cell, the more specific rule).
    fn winner_q(&self, s: usize, a: usize) -> f64 {
        if self.epsilon(self.e[s][a], self.i[s][a]) <= self.epsilon(self.global_e, self.global_i) {
            self.q[s][a]
        } else {
            self.global_q
        }
    }

    fn state_value(&self, s: usize) -> f64 {
        self.winner_q(s, 0).max(self.winner_q(s, 1))
    }

    fn update_cell(q: &mut f64, e: &mut f64, i: &mut i64, eps: f64, target: f64) {
        let hit = target >= *q - 2.0 * eps && target <= *q + 2.0 * eps;
        let pre_i = *i;
        *i = if hit { *i + 1 } else { (ETA - 1).min(*i - 1) };
        let m = ALPHA.max(1.0 / (pre_i.unsigned_abs() as f64 + 1.0));
        *q = *q * (1.0 - m) + target * m;
        *e = *e * (1.0 - m) + (*q - target).abs() * m;
    }

    fn observe(&mut self, s: usize, a: usize, reward: f64, s2: usize, terminal: bool) -> f64 {
        let v = if terminal { 0.0 } else { self.state_value(s2) };
        let target = reward + self.gamma * v;
        let eps_cell = self.epsilon(self.e[s][a], self.i[s][a]);
        let eps_global = self.epsilon(self.global_e, self.global_i);
        Self::update_cell(&mut self.q[s][a], &mut self.e[s][a], &mut self.i[s][a], eps_cell, target);
        Self::update_cell(
            &mut self.global_q,
            &mut self.global_e,
            &mut self.global_i,
            eps_global,
            target,
        );
        self.e_bar = self.global_e;
        target
    }
}

/// Deterministic MDP: rewards and transitions per (state, action). The
/// rewards are spread far apart so the global average error stays well
/// above each cell's own error and the complete rules keep winning.
const REWARD: [[f64; 2]; 2] = [[0.0, 100.0], [-100.0, 50.0]];
const NEXT: [[usize; 2]; 2] = [[0, 1], [0, 1]];

fn obs(state: usize) -> Observation {
    Observation::new(vec![state == 1])
}

/// Rule id of the complete rule for (state, action) in the initial
/// controller layout: asserted-literal rules come first.
fn cell_rule_id(state: usize, action: usize) -> u64 {
    if state == 1 {
        1 + action as u64
    } else {
        3 + action as u64
    }
}

fn run_equivalence(
    gamma: f64,
    steps: usize,
    seed: u64,
    assert_winner_property: bool,
) {
    let params = LearnerParams {
        gamma,
        beta: BETA,
        eta: ETA as u32,
        alpha: ALPHA,
        tau: 0,
        mu: 50,
        lambda: 0.95,
    };
    // One feature, one two-valued motor: the four initial rules are exactly
    // the complete rules of the MDP.
    let controller = Controller::initial(1, &[2], params.mu).unwrap();
    let mut learner = Learner::new(
        controller,
        params,
        vec![2],
        stream(seed, STREAM_GUESS),
        stream(seed, STREAM_FILL),
    );
    learner.set_rule_generation(false);

    let mut oracle = TabularOracle::new(gamma);
    let mut action_rng = stream(seed, 17);

    let mut state = 0usize;
    learner.reset(&obs(state));
    for step in 0..steps {
        let action = action_rng.random_range(0..2usize);
        let reward = REWARD[state][action];
        let next_state = NEXT[state][action];

        let log = learner.observe(&FullAction::new(vec![action]), reward, &obs(next_state), false);
        let oracle_target = oracle.observe(state, action, reward, next_state, false);

        if assert_winner_property {
            assert_eq!(
                log.winner,
                cell_rule_id(state, action),
                "step {step}: winner is not the complete rule"
            );
        }
        assert!(
            (log.target - oracle_target).abs() < 1e-9,
            "step {step}: target {} vs oracle {}",
            log.target,
            oracle_target
        );

        // Every cell and the global estimate agree to 1e-9.
        for s in 0..2 {
            for a in 0..2 {
                let rule = learner.controller().get(cell_rule_id(s, a)).unwrap();
                assert!(
                    (rule.stats.q - oracle.q[s][a]).abs() < 1e-9,
                    "step {step}: q[{s}][{a}] {} vs {}",
                    rule.stats.q,
                    oracle.q[s][a]
                );
                assert!((rule.stats.e - oracle.e[s][a]).abs() < 1e-9);
                assert_eq!(rule.stats.i, oracle.i[s][a], "step {step}: i[{s}][{a}]");
            }
        }
        let empty = learner.controller().get(learner.controller().empty_rule_id()).unwrap();
        assert!((empty.stats.q - oracle.global_q).abs() < 1e-9);
        assert!((empty.stats.e - oracle.global_e).abs() < 1e-9);
        assert_eq!(empty.stats.i, oracle.global_i);
        assert!((learner.controller().global_error() - oracle.e_bar).abs() < 1e-9);

        state = next_state;
    }
}

/// Undiscounted trace: per-cell targets are constant, so every complete
/// rule keeps a zero error estimate and strictly outranks (or ties and
/// beats, being more specific) the unconditional rule for its own cell.
#[test]
fn complete_rule_controller_equals_tabular_learning_update_for_update() {
    run_equivalence(0.0, 300, 5, true);
}

/// Discounted trace: exercises the bootstrapped target path. The winner
/// resolution is mirrored inside the oracle, so equality stays exact even
/// when the unconditional rule temporarily outranks a drifting cell.
#[test]
fn discounted_trace_matches_the_oracle_update_for_update() {
    run_equivalence(0.2, 300, 7, false);
}

#[test]
fn terminal_transitions_suppress_bootstrapping() {
    let params = LearnerParams {
        gamma: 0.9,
        beta: BETA,
        eta: ETA as u32,
        alpha: ALPHA,
        tau: 0,
        mu: 50,
        lambda: 0.95,
    };
    let controller = Controller::initial(1, &[2], params.mu).unwrap();
    let mut learner = Learner::new(
        controller,
        params,
        vec![2],
        stream(6, STREAM_GUESS),
        stream(6, STREAM_FILL),
    );
    learner.set_rule_generation(false);
    learner.reset(&obs(0));
    let log = learner.observe(&FullAction::new(vec![1]), 100.0, &obs(1), true);
    assert_eq!(log.target, 100.0);
    let rule = learner.controller().get(cell_rule_id(0, 1)).unwrap();
    assert_eq!(rule.stats.q, 100.0);
}
