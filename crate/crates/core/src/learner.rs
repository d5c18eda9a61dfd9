//! The partial-rule learning loop: probabilistic action selection, the
//! temporal-difference statistics update, and rule management (creation,
//! redundancy pruning, creation-error pruning).

use rand_chacha::ChaCha8Rng;

use crate::controller::{Controller, ControllerError};
use crate::env::Environment;
use crate::eval::{
    collect_active, complete_action, draw_guesses, eval_entries, evaluate_tree, situation_value,
    ActiveSet,
};
use crate::params::LearnerParams;
use crate::rule::{
    confidence_of, learning_rate_of, reliability_of, PartialRule, RuleId, RuleStats,
};
use crate::types::{command_accords, FullAction, Observation, PartialCommand};

/// Builds the standard initial controller for an environment shape,
/// validating that the capacity can hold it.
pub fn init_controller(
    n_features: usize,
    motor_ranges: &[usize],
    params: &LearnerParams,
) -> Result<Controller, ControllerError> {
    Controller::initial(n_features, motor_ranges, params.mu)
}

/// Outcome of appending user rules to a controller.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InjectionReport {
    pub added: Vec<RuleId>,
    pub rejected_duplicates: usize,
}

/// Appends user-supplied rules with their statistics. Ids are reassigned;
/// parent links are remapped when both parents are in the injected batch and
/// dropped otherwise. Duplicates of existing rules are rejected and counted.
pub fn inject_rules(
    controller: &mut Controller,
    rules: Vec<PartialRule>,
    freeze: bool,
) -> Result<InjectionReport, ControllerError> {
    let mut report = InjectionReport::default();
    let mut id_map = std::collections::HashMap::new();
    for mut rule in rules {
        if controller.find_duplicate(&rule.view, &rule.command).is_some() {
            report.rejected_duplicates += 1;
            continue;
        }
        let old_id = rule.id;
        let new_id = controller.allocate_id();
        rule.id = new_id;
        rule.parents = rule.parents.and_then(|(p1, p2)| {
            match (id_map.get(&p1), id_map.get(&p2)) {
                (Some(&a), Some(&b)) => Some((a, b)),
                _ => None,
            }
        });
        rule.frozen = freeze;
        controller.insert(rule)?;
        id_map.insert(old_id, new_id);
        report.added.push(new_id);
    }
    Ok(report)
}

/// The temporal-difference target: the reward alone at terminal situations,
/// otherwise reward plus the discounted goodness of the new situation.
pub fn compute_target(reward: f64, v: f64, gamma: f64, terminal: bool) -> f64 {
    if terminal {
        reward
    } else {
        reward + gamma * v
    }
}

/// A new-rule trigger fires when the winner's prediction missed the target
/// by more than the global average error (strictly).
pub fn should_create(winner_q: f64, target: f64, global_error: f64) -> bool {
    (winner_q - target).abs() > global_error
}

/// Score used to pick composition candidates: the prediction distance
/// blended with the global error by confidence. Lower is better.
pub fn candidate_score(
    stats: &RuleStats,
    target: f64,
    global_error: f64,
    params: &LearnerParams,
) -> f64 {
    let c = confidence_of(stats.i, params);
    (stats.q - target).abs() * c + global_error * (1.0 - c)
}

/// Normalized overlap of two likely-value intervals: intersection length
/// over the larger width. Point intervals count as full overlap only when
/// they coincide; a point against a proper interval counts as no overlap.
pub fn similarity(a: (f64, f64), b: (f64, f64)) -> f64 {
    let wa = a.1 - a.0;
    let wb = b.1 - b.0;
    if wa <= 0.0 && wb <= 0.0 {
        return if a.0 == b.0 { 1.0 } else { 0.0 };
    }
    if wa <= 0.0 || wb <= 0.0 {
        return 0.0;
    }
    let overlap = (a.1.min(b.1) - a.0.max(b.0)).max(0.0);
    overlap / wa.max(wb)
}

/// One statistics update of a single rule toward `target`.
///
/// The hit test uses the pre-update interval, the rate uses the pre-update
/// confidence index (so a first update has rate 1), and the error update
/// sees the already-updated value.
pub fn update_rule_stats(
    stats: &mut RuleStats,
    target: f64,
    global_error: f64,
    params: &LearnerParams,
) {
    let pre = reliability_of(stats, global_error, params);
    let hit = target >= pre.interval.0 && target <= pre.interval.1;
    let pre_i = stats.i;
    stats.i = if hit {
        stats.i + 1
    } else {
        (params.eta as i64 - 1).min(stats.i - 1)
    };
    let m = learning_rate_of(pre_i, params.alpha);
    stats.q = stats.q * (1.0 - m) + target * m;
    stats.e = stats.e * (1.0 - m) + (stats.q - target).abs() * m;
    stats.used_count += 1;
}

/// Per-step record emitted by the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLog {
    pub step: u64,
    pub reward: f64,
    pub target: f64,
    /// Controller size after rule management.
    pub rules: usize,
    /// Winner rule for the executed action among the previous active set.
    pub winner: RuleId,
    pub created: usize,
    pub pruned: usize,
    pub terminal: bool,
}

/// Summary of one episodic trial.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    pub steps: usize,
    pub total_reward: f64,
    pub reached_terminal: bool,
    pub rules: usize,
}

/// Candidate pool bound for rule generation; pairs are drawn from the
/// best-scored rules only, keeping the per-trigger cost flat.
const CANDIDATE_POOL: usize = 128;

/// The learning agent: a controller plus the retained active set and the
/// noise streams for guessing and wildcard filling.
pub struct Learner {
    controller: Controller,
    params: LearnerParams,
    motor_ranges: Vec<usize>,
    active: ActiveSet,
    pending: Option<PartialCommand>,
    guess_rng: ChaCha8Rng,
    fill_rng: ChaCha8Rng,
    rule_generation: bool,
    reorder: bool,
    steps: u64,
}

impl Learner {
    pub fn new(
        controller: Controller,
        params: LearnerParams,
        motor_ranges: Vec<usize>,
        guess_rng: ChaCha8Rng,
        fill_rng: ChaCha8Rng,
    ) -> Self {
        params.validate().expect("learner parameters in range");
        Self {
            controller,
            params,
            motor_ranges,
            active: ActiveSet::default(),
            pending: None,
            guess_rng,
            fill_rng,
            rule_generation: true,
            reorder: false,
            steps: 0,
        }
    }

    /// Disables rule creation and pruning (the order-2-only ablation).
    pub fn set_rule_generation(&mut self, enabled: bool) {
        self.rule_generation = enabled;
    }

    /// Selects the next action during the situation assessment of the
    /// previous step, sparing one tree evaluation per step at the cost of
    /// ignoring the newest reward during selection.
    pub fn set_reorder(&mut self, enabled: bool) {
        self.reorder = enabled;
    }

    pub fn controller(&self) -> &Controller {
        &self.controller
    }

    pub fn controller_mut(&mut self) -> &mut Controller {
        &mut self.controller
    }

    pub fn into_controller(self) -> Controller {
        self.controller
    }

    pub fn params(&self) -> &LearnerParams {
        &self.params
    }

    pub fn motor_ranges(&self) -> &[usize] {
        &self.motor_ranges
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Starts (or restarts) from an observation: collects the active set.
    pub fn reset(&mut self, obs: &Observation) {
        self.active = collect_active(&self.controller, obs, &self.params);
        self.pending = None;
    }

    /// Picks the action for the current situation: refreshes the retained
    /// active set, draws one guess per rule, evaluates the tree, and fills
    /// wildcards of the winning command at random.
    pub fn act(&mut self) -> FullAction {
        assert!(!self.active.is_empty(), "reset the learner before acting");
        if self.reorder {
            if let Some(best) = self.pending.take() {
                return complete_action(&best, &self.motor_ranges, &mut self.fill_rng);
            }
        }
        self.active.refresh(&self.controller, &self.params);
        let guesses = draw_guesses(&self.active, &mut self.guess_rng);
        let entries = eval_entries(&self.active, &self.controller, &guesses);
        let eval = evaluate_tree(&entries, &self.motor_ranges);
        complete_action(&eval.result.best, &self.motor_ranges, &mut self.fill_rng)
    }

    /// Feeds back the outcome of an executed action: computes the target,
    /// updates the statistics of the previously active accordant rules, and
    /// runs rule management.
    pub fn observe(
        &mut self,
        action: &FullAction,
        reward: f64,
        next_obs: &Observation,
        terminal: bool,
    ) -> StepLog {
        let previous = std::mem::take(&mut self.active);
        let next_active = collect_active(&self.controller, next_obs, &self.params);

        // Goodness of the new situation, from pre-update statistics.
        let v = if terminal {
            self.pending = None;
            0.0
        } else if self.reorder {
            let guesses = draw_guesses(&next_active, &mut self.guess_rng);
            let entries = eval_entries(&next_active, &self.controller, &guesses);
            let eval = evaluate_tree(&entries, &self.motor_ranges);
            self.pending = Some(eval.result.best.clone());
            eval.result.value
        } else {
            situation_value(&next_active, &self.controller, &self.motor_ranges)
        };
        let target = compute_target(reward, v, self.params.gamma, terminal);

        // Previously active rules accordant with the executed action, still
        // in selection order; the first one is the winner.
        let accordant: Vec<RuleId> = previous
            .entries()
            .iter()
            .filter(|e| {
                self.controller
                    .get(e.id)
                    .is_some_and(|rule| command_accords(&rule.command, action))
            })
            .map(|e| e.id)
            .collect();
        let winner = *accordant.first().expect("the empty rule always accords");
        // The winner's prediction error is judged against the value it
        // predicted, before the update folds the target in.
        let winner_q = self.controller.get(winner).expect("winner present").stats.q;

        let snapshot_error = self.controller.global_error();
        for &id in &accordant {
            let rule = self.controller.get_mut(id).expect("accordant rule present");
            update_rule_stats(&mut rule.stats, target, snapshot_error, &self.params);
            rule.stats.last_used_step = self.steps + 1;
        }
        let empty_e = self.controller.get(self.controller.empty_rule_id()).unwrap().stats.e;
        self.controller.set_global_error(empty_e);

        let (created, pruned) = if self.rule_generation {
            let winner_err = (winner_q - target).abs();
            if should_create(winner_q, target, self.controller.global_error()) {
                self.manage_rules(&accordant, target, winner_err)
            } else {
                (0, 0)
            }
        } else {
            (0, 0)
        };

        self.active = next_active;
        self.steps += 1;
        StepLog {
            step: self.steps,
            reward,
            target,
            rules: self.controller.len(),
            winner,
            created,
            pruned,
            terminal,
        }
    }

    /// One full interaction step against an environment.
    pub fn run_step(&mut self, env: &mut impl Environment) -> StepLog {
        let action = self.act();
        let outcome = env.step(&action);
        self.observe(&action, outcome.reward, &outcome.observation, outcome.terminal)
    }

    /// Runs one episodic trial: reset, then step until terminal or the cap.
    /// Hitting the step cap truncates without the terminal flag, so the last
    /// update still bootstraps.
    pub fn run_episode(&mut self, env: &mut impl Environment, max_steps: usize) -> EpisodeSummary {
        let obs = env.reset();
        self.reset(&obs);
        let mut summary = EpisodeSummary {
            steps: 0,
            total_reward: 0.0,
            reached_terminal: false,
            rules: self.controller.len(),
        };
        for _ in 0..max_steps {
            let log = self.run_step(env);
            summary.steps += 1;
            summary.total_reward += log.reward;
            summary.rules = log.rules;
            if log.terminal {
                summary.reached_terminal = true;
                break;
            }
        }
        summary
    }

    /// Runs a continuous session of exactly `steps` steps (no resets beyond
    /// the initial one), returning the per-step logs.
    pub fn run_session(&mut self, env: &mut impl Environment, steps: usize) -> Vec<StepLog> {
        if steps == 0 {
            return Vec::new();
        }
        let obs = env.reset();
        self.reset(&obs);
        (0..steps).map(|_| self.run_step(env)).collect()
    }

    /// Confidence index at which a rule's interval is considered estimable
    /// enough for redundancy checks: halfway up the confidence ramp.
    fn redundancy_floor(&self) -> i64 {
        (self.params.eta as i64 + 1) / 2
    }

    /// Elimination spares rules whose confidence index has climbed the full
    /// ramp: they are the controller's vetted knowledge, and deleting them
    /// mid-run tears holes in a working policy.
    fn is_vetted(&self, rule: &PartialRule) -> bool {
        rule.stats.i >= self.params.eta as i64
    }

    /// Redundancy of a rule: the largest interval overlap with a surviving
    /// parent. Zero for parentless rules and for rules too little sampled
    /// for their interval to mean anything.
    pub fn redundancy(&self, rule: &PartialRule) -> f64 {
        let Some((p1, p2)) = rule.parents else { return 0.0 };
        if rule.stats.i < self.redundancy_floor() {
            return 0.0;
        }
        let global_error = self.controller.global_error();
        let own = reliability_of(&rule.stats, global_error, &self.params).interval;
        [p1, p2]
            .into_iter()
            .filter_map(|p| self.controller.get(p))
            .map(|parent| {
                let pi = reliability_of(&parent.stats, global_error, &self.params).interval;
                similarity(own, pi)
            })
            .fold(0.0, f64::max)
    }

    fn is_protected(&self, rule: &PartialRule) -> bool {
        rule.id == self.controller.empty_rule_id()
            || rule.frozen
            || rule.parents.is_none()
            || self.controller.is_parent_of_surviving(rule.id)
    }

    /// Rule elimination: first every unprotected rule whose redundancy
    /// exceeds the threshold, then (if the pool is still too full) up to tau
    /// rules with the lowest creation error below the current winner error.
    pub fn prune(&mut self, winner_err: f64) -> usize {
        let lambda = self.params.lambda;
        let redundant: Vec<RuleId> = self
            .controller
            .iter()
            .filter(|rule| {
                !self.is_protected(rule) && !self.is_vetted(rule) && self.redundancy(rule) > lambda
            })
            .map(|rule| rule.id)
            .collect();
        let mut pruned = redundant.len();
        for id in redundant {
            self.controller.remove(id);
        }

        if self.controller.len() > self.params.mu.saturating_sub(self.params.tau) {
            let mut candidates: Vec<(f64, RuleId)> = self
                .controller
                .iter()
                .filter(|rule| !self.is_protected(rule) && !self.is_vetted(rule))
                .filter_map(|rule| {
                    rule.stats
                        .creation_error
                        .filter(|&ce| ce < winner_err)
                        .map(|ce| (ce, rule.id))
                })
                .collect();
            candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            for (_, id) in candidates.into_iter().take(self.params.tau) {
                self.controller.remove(id);
                pruned += 1;
            }
        }
        pruned
    }

    /// Creates up to tau rules by composing pairs of the accordant
    /// previously-active rules, preferring pairs with low candidate scores.
    /// Compositions lexicographically equal to any existing rule are
    /// skipped without consuming the budget.
    pub fn generate_rules(&mut self, accordant: &[RuleId], target: f64, winner_err: f64) -> usize {
        let global_error = self.controller.global_error();
        let mut scored: Vec<(f64, RuleId)> = accordant
            .iter()
            .filter_map(|&id| self.controller.get(id))
            .map(|rule| {
                (candidate_score(&rule.stats, target, global_error, &self.params), rule.id)
            })
            .collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        scored.truncate(CANDIDATE_POOL);

        let mut created = 0;
        'pairs: for j in 1..scored.len() {
            for i in 0..j {
                if created == self.params.tau || self.controller.len() >= self.params.mu {
                    break 'pairs;
                }
                let w1 = self.controller.get(scored[i].1).expect("candidate present");
                let w2 = self.controller.get(scored[j].1).expect("candidate present");
                let view = w1
                    .view
                    .union(&w2.view)
                    .expect("co-active rules have compatible views");
                let command = w1
                    .command
                    .union(&w2.command)
                    .expect("accordant rules have compatible commands");
                if self.controller.find_duplicate(&view, &command).is_some() {
                    continue;
                }
                let parents = Some((w1.id, w2.id));
                let id = self.controller.allocate_id();
                let rule = PartialRule {
                    id,
                    view,
                    command,
                    stats: RuleStats {
                        creation_error: Some(winner_err),
                        ..RuleStats::zeroed()
                    },
                    parents,
                    frozen: false,
                };
                self.controller.insert(rule).expect("duplicate and capacity checked");
                created += 1;
            }
        }
        created
    }

    fn manage_rules(
        &mut self,
        accordant: &[RuleId],
        target: f64,
        winner_err: f64,
    ) -> (usize, usize) {
        let mut pruned = 0;
        if self.controller.len() > self.params.mu.saturating_sub(self.params.tau) {
            pruned = self.prune(winner_err);
        }
        let created = self.generate_rules(accordant, target, winner_err);
        (created, pruned)
    }
}
