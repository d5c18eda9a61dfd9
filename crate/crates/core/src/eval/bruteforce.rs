//! Brute-force action evaluation: every action is scored independently by
//! its winner rule.

use thiserror::Error;

use crate::types::{command_accords, ElementaryAction, FullAction, PartialCommand};

use super::{EvalEntry, EvaluationResult};

/// Largest action space the brute-force evaluator accepts; beyond this the
/// tree evaluator is the right tool.
pub const MAX_BRUTE_FORCE_ACTIONS: usize = 1 << 24;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("action space of {0} actions exceeds the brute-force limit")]
    ActionSpaceTooLarge(usize),
}

#[derive(Debug, Clone)]
pub struct BruteForceEvaluation {
    pub result: EvaluationResult,
    /// Per-action winner entry index, in lexicographic action order.
    pub winners: Vec<usize>,
    /// Per-action guess (the winner's guess), in the same order.
    pub guesses: Vec<f64>,
}

fn for_each_action(motor_ranges: &[usize], mut f: impl FnMut(&FullAction)) {
    let mut values = vec![0usize; motor_ranges.len()];
    loop {
        f(&FullAction::new(values.clone()));
        // Odometer with the last motor fastest: ascending lexicographic order.
        let mut motor = motor_ranges.len();
        loop {
            if motor == 0 {
                return;
            }
            motor -= 1;
            values[motor] += 1;
            if values[motor] < motor_ranges[motor] {
                break;
            }
            values[motor] = 0;
            if motor == 0 {
                return;
            }
        }
    }
}

/// Evaluates every action: its guess is the guess of its winner rule. The
/// situation value is the maximum winner value estimate; the best action is
/// the argmax of the guesses, ties resolved toward the lexicographically
/// lowest action.
///
/// `entries` must be sorted in active-set order and end with (or contain) a
/// universally accordant rule.
pub fn evaluate_bruteforce(
    entries: &[EvalEntry<'_>],
    motor_ranges: &[usize],
) -> Result<BruteForceEvaluation, EvalError> {
    let total: usize = motor_ranges.iter().product();
    if total > MAX_BRUTE_FORCE_ACTIONS {
        return Err(EvalError::ActionSpaceTooLarge(total));
    }
    assert!(total > 0, "empty action space");

    let mut winners = Vec::with_capacity(total);
    let mut guesses = Vec::with_capacity(total);
    let mut value = f64::NEG_INFINITY;
    let mut best_guess = f64::NEG_INFINITY;
    let mut best_action: Option<FullAction> = None;
    let mut best_entry = 0usize;

    for_each_action(motor_ranges, |action| {
        let w = entries
            .iter()
            .position(|e| command_accords(e.command, action))
            .expect("some entry accords with every action");
        let e = &entries[w];
        winners.push(w);
        guesses.push(e.guess);
        if e.q > value {
            value = e.q;
        }
        if e.guess > best_guess {
            best_guess = e.guess;
            best_action = Some(action.clone());
            best_entry = w;
        }
    });

    let best_action = best_action.expect("at least one action");
    let best = PartialCommand::new(
        best_action
            .values
            .iter()
            .enumerate()
            .map(|(motor, &value)| ElementaryAction::new(motor, value))
            .collect(),
    );
    Ok(BruteForceEvaluation {
        result: EvaluationResult { value, best, best_guess, best_entry },
        winners,
        guesses,
    })
}
