//! Reinforcement learning with partial rules for agents with many binary
//! sensors and many parallel actuators.
//!
//! The crate provides the rule algebra and statistics, a brute-force and a
//! tree-based combinatorial action evaluator, the full learning loop, two
//! simulated robotic environments (landmark navigation and six-legged gait
//! generation), and a tabular Q-learning baseline.

pub mod controller;
pub mod env;
pub mod eval;
pub mod learner;
pub mod params;
pub mod qlearning;
pub mod rng;
pub mod rule;
pub mod textio;
pub mod types;

pub use controller::{Controller, ControllerError};
pub use params::LearnerParams;
pub use rule::{compose, confidence_of, learning_rate_of, reliability_of};
pub use rule::{PartialRule, Reliability, RuleId, RuleStats};
pub use types::{command_accords, view_is_active};
pub use types::{ElementaryAction, FeatureLiteral, FullAction, Observation, PartialCommand, PartialView};
