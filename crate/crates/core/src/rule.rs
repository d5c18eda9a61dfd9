//! Partial rules and the scalar statistics algebra: confidence, learning
//! rate, blended error, relevance, and the likely-value interval.

use thiserror::Error;

use crate::params::LearnerParams;
use crate::types::{PartialCommand, PartialView};

pub type RuleId = u64;

/// Learned statistics of one partial rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleStats {
    /// Expected value (reward units).
    pub q: f64,
    /// Expected absolute error of `q` (reward units).
    pub e: f64,
    /// Confidence index: a hit/miss counter, may go negative.
    pub i: i64,
    /// Times the rule was the basis of an update.
    pub used_count: u64,
    /// Step stamp of the most recent update (run-time only).
    pub last_used_step: u64,
    /// Winner prediction error at the moment the rule was created.
    /// Absent for initial and user-supplied rules.
    pub creation_error: Option<f64>,
}

impl RuleStats {
    pub fn zeroed() -> Self {
        Self { q: 0.0, e: 0.0, i: 0, used_count: 0, last_used_step: 0, creation_error: None }
    }
}

/// A (partial view, partial command) pair with learned statistics and
/// provenance links.
///
/// The empty rule has order 0 and no parents; rules built by composition
/// carry exactly two parent ids.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialRule {
    pub id: RuleId,
    pub view: PartialView,
    pub command: PartialCommand,
    pub stats: RuleStats,
    pub parents: Option<(RuleId, RuleId)>,
    /// Exempt from pruning (user-pinned rules).
    pub frozen: bool,
}

impl PartialRule {
    pub fn new(id: RuleId, view: PartialView, command: PartialCommand) -> Self {
        Self { id, view, command, stats: RuleStats::zeroed(), parents: None, frozen: false }
    }

    /// The empty rule: always active, accordant with every action.
    pub fn empty(id: RuleId) -> Self {
        Self::new(id, PartialView::empty(), PartialCommand::empty())
    }

    pub fn order(&self) -> usize {
        self.view.order() + self.command.order()
    }

    pub fn is_empty_rule(&self) -> bool {
        self.view.is_empty() && self.command.is_empty()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ComposeError {
    #[error("views disagree on a detector polarity")]
    IncompatibleViews,
    #[error("commands assign different values to a motor")]
    IncompatibleCommands,
}

/// Composes two rules: the view is the literal-set union, the command the
/// assignment-set union. Statistics start zeroed; the caller assigns the
/// creation error.
///
/// Rules that were simultaneously active and accord with one action can
/// never be incompatible, so an error here signals a caller bug.
pub fn compose(w1: &PartialRule, w2: &PartialRule, id: RuleId) -> Result<PartialRule, ComposeError> {
    let view = w1.view.union(&w2.view).ok_or(ComposeError::IncompatibleViews)?;
    let command = w1
        .command
        .union(&w2.command)
        .ok_or(ComposeError::IncompatibleCommands)?;
    Ok(PartialRule {
        id,
        view,
        command,
        stats: RuleStats::zeroed(),
        parents: Some((w1.id, w2.id)),
        frozen: false,
    })
}

/// Confidence as a function of the confidence index: a clamped cubic
/// smoothstep scaled to `[0, beta]`, flat at 0 for `i <= 0` and at `beta`
/// for `i >= eta`. The slow initial growth keeps barely-sampled rules from
/// looking trustworthy.
pub fn confidence_of(i: i64, params: &LearnerParams) -> f64 {
    if i <= 0 {
        return 0.0;
    }
    if i as u64 >= params.eta as u64 {
        return params.beta;
    }
    let x = i as f64 / params.eta as f64;
    params.beta * x * x * (3.0 - 2.0 * x)
}

/// MAM learning rate: `max(alpha, 1/(|i| + 1))`. The magnitude of the
/// confidence index counts the evidence behind the current statistics, in
/// either direction: a fresh rule (index 0) updates at rate 1, so its
/// initial statistics never matter; indexes away from zero settle toward
/// the floor `alpha`. Keeping the rate below 1 for nonzero indexes is what
/// lets the error estimates accumulate instead of being wiped by full-rate
/// tracking.
pub fn learning_rate_of(i: i64, alpha: f64) -> f64 {
    alpha.max(1.0 / (i.unsigned_abs() as f64 + 1.0))
}

/// Reliability figures of one rule under the current global error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reliability {
    /// Confidence-blended error: `e*c + global_error*(1-c)`.
    pub epsilon: f64,
    /// `1 / (1 + epsilon)`.
    pub relevance: f64,
    /// Likely-value interval `[q - 2*epsilon, q + 2*epsilon]`.
    pub interval: (f64, f64),
}

/// Blends the rule's own error with the global error by confidence and
/// derives relevance and the likely-value interval.
pub fn reliability_of(stats: &RuleStats, global_error: f64, params: &LearnerParams) -> Reliability {
    debug_assert!(global_error >= 0.0);
    let c = confidence_of(stats.i, params);
    let epsilon = stats.e * c + global_error * (1.0 - c);
    Reliability {
        epsilon,
        relevance: 1.0 / (1.0 + epsilon),
        interval: (stats.q - 2.0 * epsilon, stats.q + 2.0 * epsilon),
    }
}
