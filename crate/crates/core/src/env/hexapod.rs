//! Six-legged gait generation on a discrete advance grid.
//!
//! Each leg is a two-valued virtual motor: 0 keeps it on the ground (or
//! lands it), 1 makes it step (lift and protract to full stroke). Lifting
//! two ring-adjacent legs at once is a fall: reward -50, all airborne legs
//! are set down, no advance. Otherwise the body advances by the smallest
//! retraction available among the propelling legs and that distance is the
//! reward. A leg that lands cannot propel in its landing step.
//!
//! Legs are indexed in ring order (a clockwise circuit around the body):
//! L1, L2, L3, R3, R2, R1. The two tripods {0, 2, 4} and {1, 3, 5} are the
//! ring-independent sets; alternating them yields rewards 0 and 50 in turn,
//! the optimal average of 25.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::types::{FullAction, Observation};

use super::{EnvDescriptor, Environment, StepOutcome};

pub const N_LEGS: usize = 6;
/// Detectors 0..5: leg is in the air. Detectors 6..11: leg is more advanced
/// than its clockwise ring neighbor.
pub const N_BASE_DETECTORS: usize = 12;

/// Ring-adjacent leg pairs; two airborne neighbors mean a fall.
pub const RING_PAIRS: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)];

/// The two alternating tripods.
pub const TRIPOD_A: [usize; 3] = [0, 2, 4];
pub const TRIPOD_B: [usize; 3] = [1, 3, 5];

pub const FALL_REWARD: f64 = -50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GaitConfig {
    /// Full stroke length (distance units).
    pub stroke: f64,
    /// Number of grid points on the advance axis, including both ends.
    pub grid: usize,
    /// Extra feature detectors that flip at random each step.
    pub extra_features: usize,
}

impl Default for GaitConfig {
    fn default() -> Self {
        Self { stroke: 50.0, grid: 6, extra_features: 0 }
    }
}

impl GaitConfig {
    pub fn n_features(&self) -> usize {
        N_BASE_DETECTORS + self.extra_features
    }

    fn grid_spacing(&self) -> f64 {
        self.stroke / (self.grid - 1) as f64
    }
}

/// Kinematic state of the six legs.
#[derive(Debug, Clone, PartialEq)]
pub struct HexapodState {
    pub on_ground: [bool; N_LEGS],
    /// Advance position per leg, in [0, stroke]. Airborne legs sit at full
    /// stroke.
    pub position: [f64; N_LEGS],
    /// Landed during the current step; cannot propel until the next one.
    pub fresh_landing: [bool; N_LEGS],
    pub body_advance: f64,
    pub falls: u64,
}

impl HexapodState {
    /// No two ring-adjacent legs airborne at once.
    pub fn is_stable(&self) -> bool {
        RING_PAIRS
            .iter()
            .all(|&(a, b)| self.on_ground[a] || self.on_ground[b])
    }
}

pub struct HexapodEnv {
    config: GaitConfig,
    state: HexapodState,
    rng: ChaCha8Rng,
}

impl HexapodEnv {
    pub fn new(config: GaitConfig, rng: ChaCha8Rng) -> Self {
        assert!(config.grid >= 2, "grid needs at least two points");
        assert!(config.stroke > 0.0);
        let state = HexapodState {
            on_ground: [true; N_LEGS],
            position: [0.0; N_LEGS],
            fresh_landing: [false; N_LEGS],
            body_advance: 0.0,
            falls: 0,
        };
        Self { config, state, rng }
    }

    pub fn config(&self) -> &GaitConfig {
        &self.config
    }

    pub fn state(&self) -> &HexapodState {
        &self.state
    }

    /// Starts from all legs grounded at canonical zero advance. Useful for
    /// scripted-policy analysis; the regular reset randomizes positions.
    pub fn reset_canonical(&mut self) -> Observation {
        self.state = HexapodState {
            on_ground: [true; N_LEGS],
            position: [0.0; N_LEGS],
            fresh_landing: [false; N_LEGS],
            body_advance: 0.0,
            falls: 0,
        };
        self.observe()
    }

    /// In_the_air bits, then Advanced bits (strict comparison against the
    /// clockwise neighbor), then any extra random detectors.
    pub fn observe(&mut self) -> Observation {
        let mut bits = Vec::with_capacity(self.config.n_features());
        for leg in 0..N_LEGS {
            bits.push(!self.state.on_ground[leg]);
        }
        for leg in 0..N_LEGS {
            let clockwise = (leg + 1) % N_LEGS;
            bits.push(self.state.position[leg] > self.state.position[clockwise]);
        }
        for _ in 0..self.config.extra_features {
            bits.push(self.rng.random_bool(0.5));
        }
        Observation::new(bits)
    }
}

impl Environment for HexapodEnv {
    fn descriptor(&self) -> EnvDescriptor {
        EnvDescriptor {
            n_features: self.config.n_features(),
            motor_ranges: vec![2; N_LEGS],
            episodic: false,
        }
    }

    fn reset(&mut self) -> Observation {
        let spacing = self.config.grid_spacing();
        let grid = self.config.grid;
        self.state = HexapodState {
            on_ground: [true; N_LEGS],
            position: std::array::from_fn(|_| self.rng.random_range(0..grid) as f64 * spacing),
            fresh_landing: [false; N_LEGS],
            body_advance: 0.0,
            falls: 0,
        };
        self.observe()
    }

    fn step(&mut self, action: &FullAction) -> StepOutcome {
        assert_eq!(action.values.len(), N_LEGS, "one motor per leg");
        let state = &mut self.state;
        state.fresh_landing = [false; N_LEGS];

        // Lift and protract commanded legs; land airborne legs commanded to
        // support.
        for leg in 0..N_LEGS {
            match action.values[leg] {
                1 => {
                    state.on_ground[leg] = false;
                    state.position[leg] = self.config.stroke;
                }
                0 => {
                    if !state.on_ground[leg] {
                        state.on_ground[leg] = true;
                        state.fresh_landing[leg] = true;
                    }
                }
                other => panic!("leg motor value {other} out of range"),
            }
        }

        let reward = if !state.is_stable() {
            // Fall: every airborne leg is set down where it is; no advance.
            for leg in 0..N_LEGS {
                state.on_ground[leg] = true;
            }
            state.falls += 1;
            FALL_REWARD
        } else {
            // Body advance is limited by the least-advanced propelling leg;
            // grounded legs all shift back with the body.
            let advance = (0..N_LEGS)
                .filter(|&leg| state.on_ground[leg] && !state.fresh_landing[leg])
                .map(|leg| state.position[leg])
                .fold(f64::INFINITY, f64::min);
            let advance = if advance.is_finite() { advance } else { 0.0 };
            if advance > 0.0 {
                for leg in 0..N_LEGS {
                    if state.on_ground[leg] {
                        state.position[leg] -= advance;
                        debug_assert!(state.position[leg] >= -1e-9);
                        state.position[leg] = state.position[leg].max(0.0);
                    }
                }
            }
            state.body_advance += advance;
            advance
        };

        StepOutcome { observation: self.observe(), reward, terminal: false }
    }
}

/// The handwritten four-phase tripod cycle: step one tripod, ground all,
/// step the other tripod, ground all. Used by tests and as a reference
/// policy.
pub fn tripod_policy_action(phase: usize) -> FullAction {
    let mut values = vec![0usize; N_LEGS];
    match phase % 4 {
        0 => TRIPOD_A.iter().for_each(|&leg| values[leg] = 1),
        2 => TRIPOD_B.iter().for_each(|&leg| values[leg] = 1),
        _ => {}
    }
    FullAction::new(values)
}
