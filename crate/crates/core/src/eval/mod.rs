//! Action evaluation: the active rule set, winner-take-all value guessing,
//! and the two evaluators (brute force over the action space, and the
//! motor-keyed decision tree).

mod bruteforce;
mod tree;

pub use bruteforce::{evaluate_bruteforce, BruteForceEvaluation, EvalError};
pub use tree::{evaluate_tree, TreeEvaluation};

use rand::Rng;

use crate::controller::Controller;
use crate::params::LearnerParams;
use crate::rule::{reliability_of, RuleId};
use crate::types::{command_accords, view_is_active, FullAction, Observation, PartialCommand};

/// One active rule with the reliability figures in force when the set was
/// assembled.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveRule {
    pub id: RuleId,
    pub q: f64,
    pub epsilon: f64,
    pub relevance: f64,
    pub confidence_index: i64,
    pub order: usize,
}

/// The rules active under one observation, sorted by descending relevance
/// (ties: higher order first, then lower id). Always contains the empty
/// rule, so every action has a winner.
#[derive(Debug, Clone, Default)]
pub struct ActiveSet {
    entries: Vec<ActiveRule>,
}

impl ActiveSet {
    pub fn entries(&self) -> &[ActiveRule] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.entries.iter().map(|e| e.id)
    }

    /// Re-derives reliability from the controller's current statistics and
    /// re-sorts, dropping rules that no longer exist.
    pub fn refresh(&mut self, controller: &Controller, params: &LearnerParams) {
        let global_error = controller.global_error();
        self.entries.retain_mut(|entry| match controller.get(entry.id) {
            Some(rule) => {
                let r = reliability_of(&rule.stats, global_error, params);
                entry.q = rule.stats.q;
                entry.epsilon = r.epsilon;
                entry.relevance = r.relevance;
                entry.confidence_index = rule.stats.i;
                true
            }
            None => false,
        });
        sort_entries(&mut self.entries);
    }
}

fn sort_entries(entries: &mut [ActiveRule]) {
    let by_index = std::env::var("AB_TIE_INDEX").is_ok();
    entries.sort_unstable_by(|a, b| {
        let rel = b
            .relevance
            .partial_cmp(&a.relevance)
            .expect("relevance is never NaN");
        let idx = if by_index { b.confidence_index.cmp(&a.confidence_index) } else { std::cmp::Ordering::Equal };
        rel.then(idx).then(b.order.cmp(&a.order)).then(a.id.cmp(&b.id))
    });
}

/// Collects the rules whose views hold under `obs`, with reliability taken
/// from the controller's current statistics.
pub fn collect_active(controller: &Controller, obs: &Observation, params: &LearnerParams) -> ActiveSet {
    let global_error = controller.global_error();
    let mut entries: Vec<ActiveRule> = controller
        .iter()
        .filter(|rule| view_is_active(&rule.view, obs))
        .map(|rule| {
            let r = reliability_of(&rule.stats, global_error, params);
            ActiveRule {
                id: rule.id,
                q: rule.stats.q,
                epsilon: r.epsilon,
                relevance: r.relevance,
                confidence_index: rule.stats.i,
                order: rule.order(),
            }
        })
        .collect();
    sort_entries(&mut entries);
    ActiveSet { entries }
}

/// One rule as seen by the evaluators: its command plus the value, guess,
/// and relevance in force for this decision step. Slices of these must be
/// ordered like the active set.
#[derive(Debug, Clone)]
pub struct EvalEntry<'a> {
    pub id: RuleId,
    pub command: &'a PartialCommand,
    pub q: f64,
    pub guess: f64,
    pub relevance: f64,
}

/// Draws one guess per active rule: `q + 2*u*epsilon` with `u` uniform in
/// `[-1, 1]`. Guesses are drawn exactly once per rule per decision step and
/// shared by anything evaluating that step.
pub fn draw_guesses<R: Rng>(active: &ActiveSet, rng: &mut R) -> Vec<f64> {
    active
        .entries
        .iter()
        .map(|e| {
            let u: f64 = rng.random_range(-1.0..=1.0);
            e.q + 2.0 * u * e.epsilon
        })
        .collect()
}

/// Builds evaluator input from the active set, the controller, and per-rule
/// guesses aligned with the set's order.
pub fn eval_entries<'a>(
    active: &ActiveSet,
    controller: &'a Controller,
    guesses: &[f64],
) -> Vec<EvalEntry<'a>> {
    assert_eq!(active.len(), guesses.len(), "one guess per active rule");
    active
        .entries
        .iter()
        .zip(guesses)
        .map(|(e, &g)| EvalEntry {
            id: e.id,
            command: &controller.get(e.id).expect("active rule present").command,
            q: e.q,
            guess: g,
            relevance: e.relevance,
        })
        .collect()
}

/// The most relevant accordant rule for `action`: the first accordant entry
/// in active-set order (relevance desc, order desc, id asc).
pub fn winner(entries: &[EvalEntry<'_>], action: &FullAction) -> usize {
    entries
        .iter()
        .position(|e| command_accords(e.command, action))
        .expect("the empty rule accords with every action")
}

/// Common result of both evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    /// Goodness of the situation: the maximum over actions of the winner
    /// rule's value estimate (noise-free).
    pub value: f64,
    /// Command of the best-guess leaf; motors it leaves open are wildcards.
    pub best: PartialCommand,
    /// The guess of the best leaf.
    pub best_guess: f64,
    /// Index (into the entry slice) of the rule providing the best leaf.
    pub best_entry: usize,
}

/// Fills each wildcard motor of `best` with a uniformly random in-range
/// value; motors the command fixes keep their values.
pub fn complete_action<R: Rng>(
    best: &PartialCommand,
    motor_ranges: &[usize],
    rng: &mut R,
) -> FullAction {
    let values = motor_ranges
        .iter()
        .enumerate()
        .map(|(motor, &range)| match best.value_for(motor) {
            Some(v) => v,
            None => rng.random_range(0..range),
        })
        .collect();
    FullAction::new(values)
}

/// Noise-free situation goodness: the tree evaluation with guesses pinned to
/// the value estimates. Callers flag terminal situations themselves (the
/// goodness of a terminal situation is 0 by definition).
pub fn situation_value(active: &ActiveSet, controller: &Controller, motor_ranges: &[usize]) -> f64 {
    let guesses: Vec<f64> = active.entries.iter().map(|e| e.q).collect();
    let entries = eval_entries(active, controller, &guesses);
    evaluate_tree(&entries, motor_ranges).result.value
}

/// A small worked rule table over three two-valued motors: eight always
/// active command-only rules with fixed values, errors, relevances, and
/// guesses. Used by documentation, tests, and the evaluator benchmark.
pub mod sample {
    use crate::types::{ElementaryAction, PartialCommand};

    /// (command assignments, q, e, relevance, guess), most relevant first.
    pub const THREE_MOTOR_TABLE: [(&[(usize, usize)], f64, f64, f64, f64); 8] = [
        (&[(0, 1), (1, 1)], 5.0, 0.1, 0.83, 5.1),
        (&[(0, 1)], 7.0, 0.9, 0.52, 6.5),
        (&[(1, 1), (2, 1)], 8.0, 2.0, 0.33, 6.0),
        (&[(1, 1)], 3.0, 3.1, 0.24, 6.2),
        (&[(0, 0)], 2.0, 3.5, 0.22, 5.3),
        (&[(1, 0)], 10.0, 3.6, 0.21, 4.1),
        (&[(2, 1)], 1.0, 4.0, 0.20, 5.2),
        (&[(2, 0)], 6.0, 4.5, 0.18, 12.7),
    ];

    pub const THREE_MOTOR_RANGES: [usize; 3] = [2, 2, 2];

    /// The table's commands as owned values, in table order.
    pub fn commands() -> Vec<PartialCommand> {
        THREE_MOTOR_TABLE
            .iter()
            .map(|(assignments, ..)| {
                PartialCommand::new(
                    assignments
                        .iter()
                        .map(|&(m, v)| ElementaryAction::new(m, v))
                        .collect(),
                )
            })
            .collect()
    }
}
