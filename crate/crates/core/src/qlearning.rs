//! Tabular Q-learning over full observations and full joint actions, used
//! as the non-generalizing comparison baseline.

use rand::Rng;

use crate::types::{FullAction, Observation};

/// Learning-rate schedule for table entries.
#[derive(Debug, Clone, PartialEq)]
pub enum RateSchedule {
    /// Fixed rate.
    Constant(f64),
    /// Per-entry rate `max(alpha, 1/(n+1))` with `n` the entry's update
    /// count. Matches the partial-rule learner's first-update behavior;
    /// used by the cross-implementation equivalence test.
    Mam { alpha: f64 },
}

/// Dense state-action value table: `2^n_features` states by the product of
/// the motor ranges.
#[derive(Debug, Clone)]
pub struct QTable {
    values: Vec<f64>,
    update_counts: Vec<u32>,
    n_states: usize,
    n_actions: usize,
    motor_ranges: Vec<usize>,
    schedule: RateSchedule,
    gamma: f64,
    explore: f64,
}

impl QTable {
    pub fn new(
        n_features: usize,
        motor_ranges: &[usize],
        schedule: RateSchedule,
        gamma: f64,
        explore: f64,
    ) -> Self {
        assert!(n_features < 32, "observation too wide for a dense table");
        let n_states = 1usize << n_features;
        let n_actions = motor_ranges.iter().product();
        let mam = matches!(schedule, RateSchedule::Mam { .. });
        Self {
            values: vec![0.0; n_states * n_actions],
            update_counts: if mam { vec![0; n_states * n_actions] } else { Vec::new() },
            n_states,
            n_actions,
            motor_ranges: motor_ranges.to_vec(),
            schedule,
            gamma,
            explore,
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn entries(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.n_actions + action]
    }

    /// Packs a full action into its index (last motor fastest, matching
    /// lexicographic action order).
    pub fn action_index(&self, action: &FullAction) -> usize {
        debug_assert_eq!(action.values.len(), self.motor_ranges.len());
        action
            .values
            .iter()
            .zip(&self.motor_ranges)
            .fold(0usize, |acc, (&v, &range)| {
                debug_assert!(v < range);
                acc * range + v
            })
    }

    /// Unpacks an action index into motor values.
    pub fn action_from_index(&self, mut index: usize) -> FullAction {
        let mut values = vec![0usize; self.motor_ranges.len()];
        for motor in (0..self.motor_ranges.len()).rev() {
            values[motor] = index % self.motor_ranges[motor];
            index /= self.motor_ranges[motor];
        }
        FullAction::new(values)
    }

    pub fn state_index(&self, obs: &Observation) -> usize {
        let s = obs.as_index();
        debug_assert!(s < self.n_states);
        s
    }

    /// Greedy action for a state, ties toward the lowest action index.
    pub fn greedy(&self, state: usize) -> usize {
        let row = &self.values[state * self.n_actions..(state + 1) * self.n_actions];
        let mut best = 0;
        for (a, &q) in row.iter().enumerate() {
            if q > row[best] {
                best = a;
            }
        }
        best
    }

    /// Epsilon-greedy selection: a uniform random action with the configured
    /// exploration probability, the greedy action otherwise.
    pub fn select<R: Rng>(&self, obs: &Observation, rng: &mut R) -> FullAction {
        let explore = self.explore > 0.0 && rng.random_bool(self.explore);
        let index = if explore {
            rng.random_range(0..self.n_actions)
        } else {
            self.greedy(self.state_index(obs))
        };
        self.action_from_index(index)
    }

    fn rate(&mut self, entry: usize) -> f64 {
        match self.schedule {
            RateSchedule::Constant(alpha) => alpha,
            RateSchedule::Mam { alpha } => {
                let n = self.update_counts[entry];
                self.update_counts[entry] = n + 1;
                alpha.max(1.0 / (n as f64 + 1.0))
            }
        }
    }

    /// One sample update toward `r + gamma * max_a Q(s2, a)` (bootstrapping
    /// suppressed at terminal transitions).
    pub fn update(&mut self, state: usize, action: usize, reward: f64, next_state: usize, terminal: bool) {
        let bootstrap = if terminal {
            0.0
        } else {
            let row = &self.values[next_state * self.n_actions..(next_state + 1) * self.n_actions];
            row.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        };
        let target = reward + self.gamma * bootstrap;
        let entry = state * self.n_actions + action;
        let rate = self.rate(entry);
        self.values[entry] += rate * (target - self.values[entry]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, STREAM_EXPLORE};

    #[test]
    fn gait_table_shape() {
        let table = QTable::new(12, &[2; 6], RateSchedule::Constant(0.5), 0.2, 0.1);
        assert_eq!(table.n_states(), 4096);
        assert_eq!(table.n_actions(), 64);
    }

    #[test]
    fn all_zero_table_greedy_picks_action_zero() {
        let table = QTable::new(4, &[2, 2], RateSchedule::Constant(0.5), 0.9, 0.0);
        let obs = Observation::new(vec![true, false, true, false]);
        let mut rng = stream(1, STREAM_EXPLORE);
        assert_eq!(table.select(&obs, &mut rng), FullAction::new(vec![0, 0]));
    }

    #[test]
    fn exploration_frequency_matches_the_configured_rate() {
        let mut table = QTable::new(2, &[2, 2], RateSchedule::Constant(0.5), 0.9, 0.1);
        // Make action 0 uniquely greedy so exploration is visible whenever a
        // non-zero action appears... except exploring can also pick 0, so
        // count greedy draws instead against the expected (1 - eps) + eps/4.
        let s = 0;
        table.update(s, 0, 100.0, 1, true);
        let obs = Observation::new(vec![false, false]);
        let mut rng = stream(2, STREAM_EXPLORE);
        const N: usize = 100_000;
        let mut zeros = 0usize;
        for _ in 0..N {
            if table.select(&obs, &mut rng).values == [0, 0] {
                zeros += 1;
            }
        }
        let expected = (1.0 - 0.1 + 0.1 / 4.0) * N as f64;
        let sigma = (N as f64 * 0.925 * 0.075).sqrt();
        assert!(
            (zeros as f64 - expected).abs() < 3.0 * sigma,
            "greedy frequency {zeros} too far from {expected}"
        );
    }

    #[test]
    fn terminal_update_with_half_rate_halves_the_target() {
        let mut table = QTable::new(2, &[2], RateSchedule::Constant(0.5), 0.9, 0.0);
        table.update(1, 0, 100.0, 0, true);
        assert_eq!(table.get(1, 0), 50.0);
    }

    #[test]
    fn full_rate_single_update_hits_the_target_exactly() {
        let mut table = QTable::new(2, &[2], RateSchedule::Constant(1.0), 0.5, 0.0);
        table.update(0, 1, 8.0, 1, false);
        assert_eq!(table.get(0, 1), 8.0);
    }

    #[test]
    fn constant_reward_loop_converges_to_the_fixed_point() {
        // One state, one action, r = 3, gamma = 0.7: fixed point 10.
        let mut table = QTable::new(0, &[1], RateSchedule::Constant(0.5), 0.7, 0.0);
        for _ in 0..1_000 {
            table.update(0, 0, 3.0, 0, false);
        }
        assert!((table.get(0, 0) - 10.0).abs() < 1e-6);
    }

    #[test]
    fn two_state_chain_approaches_the_value_ladder() {
        // State 1 reaches the goal (terminal, reward 100) with action 1;
        // state 0 reaches state 1 with action 1. gamma = 0.9: Q(0,1) -> 90,
        // Q(1,1) -> 100.
        let mut table = QTable::new(1, &[2], RateSchedule::Constant(0.5), 0.9, 0.0);
        for _ in 0..200 {
            table.update(0, 1, 0.0, 1, false);
            table.update(1, 1, 100.0, 0, true);
        }
        assert!((table.get(1, 1) - 100.0).abs() < 1e-6);
        assert!((table.get(0, 1) - 90.0).abs() < 1e-6);
    }

    #[test]
    fn mam_schedule_first_update_is_authoritative() {
        let mut table = QTable::new(1, &[2], RateSchedule::Mam { alpha: 0.1 }, 0.9, 0.0);
        table.update(0, 0, 77.0, 0, true);
        assert_eq!(table.get(0, 0), 77.0);
        // Second update has rate 1/2.
        table.update(0, 0, 0.0, 0, true);
        assert_eq!(table.get(0, 0), 38.5);
    }
}
