//! Learner parameters and their validity ranges.

use thiserror::Error;

/// Tunable parameters of the partial-rule learner.
///
/// `beta` must stay below 1 so the value intervals never collapse while the
/// global error is nonzero, preserving exploration.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerParams {
    /// Discount factor, in `[0, 1]`.
    pub gamma: f64,
    /// Confidence ceiling, in `(0, 1)`.
    pub beta: f64,
    /// Confidence ramp length: the index at which confidence reaches `beta`.
    pub eta: u32,
    /// Learning-rate floor, in `(0, 1]`.
    pub alpha: f64,
    /// Rules created per generation trigger.
    pub tau: usize,
    /// Rule capacity.
    pub mu: usize,
    /// Redundancy threshold for pruning, in `(0, 1)`.
    pub lambda: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("gamma must be in [0, 1], got {0}")]
    Gamma(f64),
    #[error("beta must be in (0, 1), got {0}")]
    Beta(f64),
    #[error("eta must be positive")]
    Eta,
    #[error("alpha must be in (0, 1], got {0}")]
    Alpha(f64),
    #[error("mu must be positive")]
    Mu,
    #[error("lambda must be in (0, 1), got {0}")]
    Lambda(f64),
}

impl LearnerParams {
    /// Parameter set used for the landmark navigation task.
    pub fn navigation() -> Self {
        Self {
            gamma: 0.9,
            beta: 0.99,
            eta: 5,
            alpha: 0.1,
            tau: 5,
            mu: 200,
            lambda: 0.95,
        }
    }

    /// Parameter set used for the six-legged gait task.
    pub fn gait() -> Self {
        Self {
            gamma: 0.2,
            beta: 0.99,
            eta: 22,
            alpha: 0.1,
            tau: 150,
            mu: 10_000,
            lambda: 0.95,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(0.0..=1.0).contains(&self.gamma) || !self.gamma.is_finite() {
            return Err(ParamError::Gamma(self.gamma));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(ParamError::Beta(self.beta));
        }
        if self.eta == 0 {
            return Err(ParamError::Eta);
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ParamError::Alpha(self.alpha));
        }
        if self.mu == 0 {
            return Err(ParamError::Mu);
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(ParamError::Lambda(self.lambda));
        }
        Ok(())
    }
}
