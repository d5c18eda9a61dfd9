//! The bounded, ordered rule population and its bookkeeping: duplicate
//! detection, parent reference counts, and the global error mirror.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::rule::{PartialRule, RuleId, RuleStats};
use crate::types::{ElementaryAction, FeatureLiteral, PartialCommand, PartialView};

/// Canonical key of a rule's structure, used for lexicographic duplicate
/// detection: sorted literals, a separator, then sorted assignments.
pub(crate) fn structure_key(view: &PartialView, command: &PartialCommand) -> Vec<u64> {
    let mut key = Vec::with_capacity(view.order() + command.order() + 1);
    for lit in view.literals() {
        key.push((lit.detector as u64) << 1 | lit.polarity as u64);
    }
    key.push(u64::MAX);
    for ea in command.assignments() {
        key.push((ea.motor as u64) << 32 | ea.value as u64);
    }
    key
}

#[derive(Debug, Error, PartialEq)]
pub enum ControllerError {
    #[error("capacity {mu} too small for {required} initial rules")]
    CapacityTooSmall { mu: usize, required: usize },
    #[error("controller is full (capacity {0})")]
    Full(usize),
    #[error("rule duplicates existing rule {0}")]
    Duplicate(RuleId),
}

/// Bounded collection of partial rules, keyed by id, containing exactly one
/// empty rule. The empty rule's error estimate is mirrored as the global
/// average error.
#[derive(Debug, Clone)]
pub struct Controller {
    rules: BTreeMap<RuleId, PartialRule>,
    capacity: usize,
    index: HashMap<Vec<u64>, RuleId>,
    parent_refs: HashMap<RuleId, u32>,
    empty_rule: RuleId,
    next_id: RuleId,
    global_error: f64,
}

impl Controller {
    /// A controller holding only the empty rule.
    pub fn with_empty_rule(capacity: usize) -> Result<Self, ControllerError> {
        Self::from_rules(vec![PartialRule::empty(0)], capacity)
    }

    /// Builds a controller from an explicit rule set, which must contain
    /// exactly one empty rule, no duplicate ids or structures, and fit the
    /// capacity. The global error is synced from the empty rule.
    pub fn from_rules(rules: Vec<PartialRule>, capacity: usize) -> Result<Self, ControllerError> {
        if capacity < rules.len().max(1) {
            return Err(ControllerError::CapacityTooSmall {
                mu: capacity,
                required: rules.len().max(1),
            });
        }
        let empty_ids: Vec<RuleId> =
            rules.iter().filter(|r| r.is_empty_rule()).map(|r| r.id).collect();
        assert_eq!(empty_ids.len(), 1, "rule set must contain exactly one empty rule");
        let mut controller = Self {
            rules: BTreeMap::new(),
            capacity,
            index: HashMap::new(),
            parent_refs: HashMap::new(),
            empty_rule: empty_ids[0],
            next_id: 0,
            global_error: 0.0,
        };
        for rule in rules {
            controller.insert(rule)?;
        }
        controller.global_error = controller.rules[&controller.empty_rule].stats.e;
        Ok(controller)
    }

    /// The standard initial controller: the empty rule plus one rule per
    /// (literal polarity x feature x elementary action), statistics zeroed.
    ///
    /// Yields `1 + 2 * n_f * sum(motor_ranges)` rules.
    pub fn initial(
        n_features: usize,
        motor_ranges: &[usize],
        capacity: usize,
    ) -> Result<Self, ControllerError> {
        let n_elementary: usize = motor_ranges.iter().sum();
        let required = 1 + 2 * n_features * n_elementary;
        if capacity < required {
            return Err(ControllerError::CapacityTooSmall { mu: capacity, required });
        }
        let mut controller = Self::with_empty_rule(capacity)?;
        for detector in 0..n_features {
            for polarity in [true, false] {
                for (motor, &range) in motor_ranges.iter().enumerate() {
                    for value in 0..range {
                        let view = PartialView::new(vec![FeatureLiteral { detector, polarity }]);
                        let command =
                            PartialCommand::new(vec![ElementaryAction::new(motor, value)]);
                        let id = controller.allocate_id();
                        controller
                            .insert(PartialRule::new(id, view, command))
                            .expect("initial rules are distinct and within capacity");
                    }
                }
            }
        }
        Ok(controller)
    }

    pub fn allocate_id(&mut self) -> RuleId {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn empty_rule_id(&self) -> RuleId {
        self.empty_rule
    }

    /// The global average value-prediction error, as mirrored from the empty
    /// rule at the end of the last statistics update.
    pub fn global_error(&self) -> f64 {
        self.global_error
    }

    pub fn set_global_error(&mut self, e: f64) {
        self.global_error = e;
    }

    pub fn get(&self, id: RuleId) -> Option<&PartialRule> {
        self.rules.get(&id)
    }

    pub fn get_mut(&mut self, id: RuleId) -> Option<&mut PartialRule> {
        self.rules.get_mut(&id)
    }

    pub fn contains(&self, id: RuleId) -> bool {
        self.rules.contains_key(&id)
    }

    /// Iterates rules in ascending id (creation) order.
    pub fn iter(&self) -> impl Iterator<Item = &PartialRule> {
        self.rules.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.rules.keys().copied()
    }

    /// The id of an existing rule with the same literal and assignment sets.
    pub fn find_duplicate(&self, view: &PartialView, command: &PartialCommand) -> Option<RuleId> {
        self.index.get(&structure_key(view, command)).copied()
    }

    /// True when `id` is recorded as a parent of some present rule.
    pub fn is_parent_of_surviving(&self, id: RuleId) -> bool {
        self.parent_refs.get(&id).is_some_and(|&n| n > 0)
    }

    /// Inserts a rule, rejecting duplicates and capacity overflow.
    pub fn insert(&mut self, rule: PartialRule) -> Result<RuleId, ControllerError> {
        if self.rules.len() >= self.capacity {
            return Err(ControllerError::Full(self.capacity));
        }
        let key = structure_key(&rule.view, &rule.command);
        if let Some(&existing) = self.index.get(&key) {
            return Err(ControllerError::Duplicate(existing));
        }
        let id = rule.id;
        debug_assert!(!self.rules.contains_key(&id), "rule id {id} reused");
        if let Some((p1, p2)) = rule.parents {
            *self.parent_refs.entry(p1).or_insert(0) += 1;
            *self.parent_refs.entry(p2).or_insert(0) += 1;
        }
        self.index.insert(key, id);
        self.rules.insert(id, rule);
        if id >= self.next_id {
            self.next_id = id + 1;
        }
        Ok(id)
    }

    /// Removes a rule. The empty rule cannot be removed.
    pub fn remove(&mut self, id: RuleId) -> Option<PartialRule> {
        if id == self.empty_rule {
            return None;
        }
        let rule = self.rules.remove(&id)?;
        self.index.remove(&structure_key(&rule.view, &rule.command));
        if let Some((p1, p2)) = rule.parents {
            for p in [p1, p2] {
                if let Some(n) = self.parent_refs.get_mut(&p) {
                    *n = n.saturating_sub(1);
                    if *n == 0 {
                        self.parent_refs.remove(&p);
                    }
                }
            }
        }
        Some(rule)
    }

    /// Resets every rule's statistics to zero (warm-start semantics) and
    /// clears the global error.
    pub fn reset_statistics(&mut self) {
        for rule in self.rules.values_mut() {
            rule.stats = RuleStats::zeroed();
        }
        self.global_error = 0.0;
    }

    /// Checks the structural invariants; used by tests and debug assertions.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.rules.len() > self.capacity {
            return Err(format!("{} rules exceed capacity {}", self.rules.len(), self.capacity));
        }
        let empties = self.rules.values().filter(|r| r.is_empty_rule()).count();
        if empties != 1 {
            return Err(format!("expected exactly one empty rule, found {empties}"));
        }
        if self.index.len() != self.rules.len() {
            return Err("duplicate-structure index out of sync".into());
        }
        let e = self.rules[&self.empty_rule].stats.e;
        if self.global_error != e {
            return Err(format!("global error {} != empty rule e {}", self.global_error, e));
        }
        for rule in self.rules.values() {
            if let Some((p1, p2)) = rule.parents {
                if p1 >= rule.id || p2 >= rule.id {
                    return Err(format!("rule {} has a parent with a larger id", rule.id));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_rule_counts() {
        // One feature, one motor of two values: 1 + 2*1*2 = 5.
        let c = Controller::initial(1, &[2], 50).unwrap();
        assert_eq!(c.len(), 5);

        // Navigation: 10 features, two motors of three values: 121.
        let c = Controller::initial(10, &[3, 3], 200).unwrap();
        assert_eq!(c.len(), 121);

        // Gait: 12 features, six motors of two values: 289.
        let c = Controller::initial(12, &[2; 6], 10_000).unwrap();
        assert_eq!(c.len(), 289);
    }

    #[test]
    fn capacity_too_small_is_a_configuration_error() {
        let err = Controller::initial(10, &[3, 3], 100).unwrap_err();
        assert_eq!(err, ControllerError::CapacityTooSmall { mu: 100, required: 121 });
    }

    #[test]
    fn duplicate_structures_are_rejected() {
        let mut c = Controller::with_empty_rule(10).unwrap();
        let id = c.allocate_id();
        let r = PartialRule::new(
            id,
            PartialView::new(vec![FeatureLiteral::asserted(0)]),
            PartialCommand::empty(),
        );
        c.insert(r.clone()).unwrap();
        let id2 = c.allocate_id();
        let mut r2 = r;
        r2.id = id2;
        assert_eq!(c.insert(r2), Err(ControllerError::Duplicate(id)));
    }

    #[test]
    fn empty_rule_cannot_be_removed() {
        let mut c = Controller::with_empty_rule(10).unwrap();
        assert!(c.remove(c.empty_rule_id()).is_none());
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn parent_refcounts_follow_insert_and_remove() {
        let mut c = Controller::initial(2, &[2], 50).unwrap();
        // Rule 1 = (fd0 -> m0=0), rule 5 = (fd1 -> m0=0): compatible pair.
        let w1 = c.get(1).unwrap().clone();
        let w5 = c.get(5).unwrap().clone();
        let id = c.allocate_id();
        let composed = crate::rule::compose(&w1, &w5, id).unwrap();
        let cid = c.insert(composed).unwrap();
        assert!(c.is_parent_of_surviving(1));
        assert!(c.is_parent_of_surviving(5));
        c.remove(cid);
        assert!(!c.is_parent_of_surviving(1));
        assert!(!c.is_parent_of_surviving(5));
    }

    #[test]
    fn invariants_hold_after_init() {
        let c = Controller::initial(3, &[2, 2], 100).unwrap();
        assert!(c.check_invariants().is_ok());
    }
}
