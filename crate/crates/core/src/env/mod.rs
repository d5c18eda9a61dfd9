//! Environment contract shared by the simulated tasks.

pub mod hexapod;
pub mod nav;

use crate::types::{FullAction, Observation};

/// Static shape of an environment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvDescriptor {
    pub n_features: usize,
    pub motor_ranges: Vec<usize>,
    pub episodic: bool,
}

/// Result of one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observation: Observation,
    pub reward: f64,
    pub terminal: bool,
}

/// A discrete task: observation production, action application, reward,
/// and terminal signaling.
pub trait Environment {
    fn descriptor(&self) -> EnvDescriptor;
    fn reset(&mut self) -> Observation;
    fn step(&mut self, action: &FullAction) -> StepOutcome;
}
