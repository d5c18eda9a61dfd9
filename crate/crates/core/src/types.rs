//! Domain types for sensing and acting: feature literals, partial views,
//! elementary actions, partial commands, full actions, and observations.

use std::fmt;

/// One feature detector, asserted or negated.
///
/// `polarity == true` means the detector must be active, `false` means it
/// must be inactive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureLiteral {
    pub detector: usize,
    pub polarity: bool,
}

impl FeatureLiteral {
    pub fn asserted(detector: usize) -> Self {
        Self { detector, polarity: true }
    }

    pub fn negated(detector: usize) -> Self {
        Self { detector, polarity: false }
    }
}

impl fmt::Display for FeatureLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity {
            write!(f, "fd{}", self.detector)
        } else {
            write!(f, "!fd{}", self.detector)
        }
    }
}

/// A conjunction of feature literals. The empty view holds everywhere.
///
/// Literals are kept sorted by detector index; a detector appears at most
/// once, in one polarity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialView {
    literals: Vec<FeatureLiteral>,
}

impl PartialView {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a view from literals, sorting them by detector index.
    ///
    /// Panics if a detector appears twice (in either polarity).
    pub fn new(mut literals: Vec<FeatureLiteral>) -> Self {
        literals.sort_unstable();
        for pair in literals.windows(2) {
            assert!(
                pair[0].detector != pair[1].detector,
                "detector {} appears twice in partial view",
                pair[0].detector
            );
        }
        Self { literals }
    }

    pub fn literals(&self) -> &[FeatureLiteral] {
        &self.literals
    }

    pub fn order(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Set union with another view. `None` when the views disagree on the
    /// polarity of some detector.
    pub fn union(&self, other: &PartialView) -> Option<PartialView> {
        let mut merged = self.literals.clone();
        for lit in &other.literals {
            match merged.iter().find(|l| l.detector == lit.detector) {
                Some(existing) if existing.polarity != lit.polarity => return None,
                Some(_) => {}
                None => merged.push(*lit),
            }
        }
        merged.sort_unstable();
        Some(PartialView { literals: merged })
    }
}

/// Assignment of one value to one motor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryAction {
    pub motor: usize,
    pub value: usize,
}

impl ElementaryAction {
    pub fn new(motor: usize, value: usize) -> Self {
        Self { motor, value }
    }
}

impl fmt::Display for ElementaryAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}={}", self.motor, self.value)
    }
}

/// A consistent set of elementary actions. The empty command accords with
/// every action.
///
/// Assignments are kept sorted by motor index; a motor appears at most once.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialCommand {
    assignments: Vec<ElementaryAction>,
}

impl PartialCommand {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a command from assignments, sorting them by motor index.
    ///
    /// Panics if a motor is assigned twice.
    pub fn new(mut assignments: Vec<ElementaryAction>) -> Self {
        assignments.sort_unstable();
        for pair in assignments.windows(2) {
            assert!(
                pair[0].motor != pair[1].motor,
                "motor {} assigned twice in partial command",
                pair[0].motor
            );
        }
        Self { assignments }
    }

    pub fn assignments(&self) -> &[ElementaryAction] {
        &self.assignments
    }

    pub fn order(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// The value this command fixes for `motor`, if any.
    pub fn value_for(&self, motor: usize) -> Option<usize> {
        self.assignments
            .iter()
            .find(|ea| ea.motor == motor)
            .map(|ea| ea.value)
    }

    /// Set union with another command. `None` when the commands assign
    /// different values to the same motor.
    pub fn union(&self, other: &PartialCommand) -> Option<PartialCommand> {
        let mut merged = self.assignments.clone();
        for ea in &other.assignments {
            match merged.iter().find(|e| e.motor == ea.motor) {
                Some(existing) if existing.value != ea.value => return None,
                Some(_) => {}
                None => merged.push(*ea),
            }
        }
        merged.sort_unstable();
        Some(PartialCommand { assignments: merged })
    }

    /// Extends this command with one more assignment. Panics if the motor is
    /// already fixed to a different value.
    pub fn with(&self, ea: ElementaryAction) -> PartialCommand {
        match self.value_for(ea.motor) {
            Some(v) => {
                assert_eq!(v, ea.value, "motor {} already fixed", ea.motor);
                self.clone()
            }
            None => {
                let mut assignments = self.assignments.clone();
                assignments.push(ea);
                assignments.sort_unstable();
                PartialCommand { assignments }
            }
        }
    }
}

/// One command value per motor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FullAction {
    pub values: Vec<usize>,
}

impl FullAction {
    pub fn new(values: Vec<usize>) -> Self {
        Self { values }
    }

    pub fn motors(&self) -> usize {
        self.values.len()
    }
}

/// Truth values for every feature detector of the environment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub bits: Vec<bool>,
}

impl Observation {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Packs the bits into an integer index (bit i at weight 2^i).
    ///
    /// Panics if there are more than 63 detectors.
    pub fn as_index(&self) -> usize {
        assert!(self.bits.len() < 64, "observation too wide to index");
        self.bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i))
    }
}

/// True iff every literal of `view` matches the corresponding observation bit.
///
/// The empty view is a vacuous conjunction and is active everywhere.
pub fn view_is_active(view: &PartialView, obs: &Observation) -> bool {
    view.literals().iter().all(|lit| {
        debug_assert!(lit.detector < obs.bits.len(), "detector index out of range");
        obs.bits[lit.detector] == lit.polarity
    })
}

/// True iff `cmd` is a subset of `action`: every assignment matches the
/// action's value on that motor.
pub fn command_accords(cmd: &PartialCommand, action: &FullAction) -> bool {
    cmd.assignments().iter().all(|ea| {
        debug_assert!(ea.motor < action.values.len(), "motor index out of range");
        action.values[ea.motor] == ea.value
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(bits: &[u8]) -> Observation {
        Observation::new(bits.iter().map(|&b| b != 0).collect())
    }

    // Detector layout used by the navigation task:
    // 0 Rock, 1 Boat, 2 Flower, 3 Tree, 4 Bush, 5 Water, 6..9 noise.
    fn a2_observation() -> Observation {
        obs(&[1, 0, 0, 0, 1, 1, 0, 0, 0, 0])
    }

    #[test]
    fn empty_view_is_active_everywhere() {
        assert!(view_is_active(&PartialView::empty(), &a2_observation()));
        assert!(view_is_active(&PartialView::empty(), &obs(&[0, 0])));
    }

    #[test]
    fn view_matches_rock_not_boat_at_a2() {
        let view = PartialView::new(vec![
            FeatureLiteral::asserted(0),
            FeatureLiteral::negated(1),
        ]);
        assert!(view_is_active(&view, &a2_observation()));
    }

    #[test]
    fn view_boat_inactive_at_a2() {
        let view = PartialView::new(vec![FeatureLiteral::asserted(1)]);
        assert!(!view_is_active(&view, &a2_observation()));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn out_of_range_detector_is_a_contract_violation() {
        let view = PartialView::new(vec![FeatureLiteral::asserted(12)]);
        view_is_active(&view, &obs(&[1, 0]));
    }

    #[test]
    fn empty_command_accords_with_everything() {
        assert!(command_accords(
            &PartialCommand::empty(),
            &FullAction::new(vec![0, 1, 2])
        ));
    }

    #[test]
    fn command_subset_accords() {
        let cmd = PartialCommand::new(vec![
            ElementaryAction::new(0, 1),
            ElementaryAction::new(1, 1),
        ]);
        assert!(command_accords(&cmd, &FullAction::new(vec![1, 1, 0])));
    }

    #[test]
    fn conflicting_value_does_not_accord() {
        let cmd = PartialCommand::new(vec![ElementaryAction::new(0, 0)]);
        assert!(!command_accords(&cmd, &FullAction::new(vec![1, 1, 1])));
    }

    #[test]
    fn union_rejects_opposite_polarity() {
        let a = PartialView::new(vec![FeatureLiteral::asserted(3)]);
        let b = PartialView::new(vec![FeatureLiteral::negated(3)]);
        assert!(a.union(&b).is_none());
    }

    #[test]
    fn union_rejects_conflicting_motor_values() {
        let a = PartialCommand::new(vec![ElementaryAction::new(2, 0)]);
        let b = PartialCommand::new(vec![ElementaryAction::new(2, 1)]);
        assert!(a.union(&b).is_none());
    }

    #[test]
    #[should_panic(expected = "appears twice")]
    fn duplicate_detector_rejected() {
        PartialView::new(vec![
            FeatureLiteral::asserted(1),
            FeatureLiteral::negated(1),
        ]);
    }
}
