//! Property tests for the rule algebra and the statistics scalar functions.

use prl_core::params::LearnerParams;
use prl_core::rule::{compose, confidence_of, learning_rate_of, reliability_of, PartialRule, RuleStats};
use prl_core::textio::{parse_rule, render_rule};
use prl_core::types::{
    command_accords, view_is_active, ElementaryAction, FeatureLiteral, FullAction, Observation,
    PartialCommand, PartialView,
};
use proptest::prelude::*;

const N_F: usize = 8;
const N_M: usize = 4;
const RANGE: usize = 3;

fn arb_view() -> impl Strategy<Value = PartialView> {
    proptest::collection::btree_map(0..N_F, any::<bool>(), 0..=4).prop_map(|m| {
        PartialView::new(
            m.into_iter()
                .map(|(detector, polarity)| FeatureLiteral { detector, polarity })
                .collect(),
        )
    })
}

fn arb_command() -> impl Strategy<Value = PartialCommand> {
    proptest::collection::btree_map(0..N_M, 0..RANGE, 0..=3).prop_map(|m| {
        PartialCommand::new(
            m.into_iter()
                .map(|(motor, value)| ElementaryAction { motor, value })
                .collect(),
        )
    })
}

fn arb_obs() -> impl Strategy<Value = Observation> {
    proptest::collection::vec(any::<bool>(), N_F).prop_map(Observation::new)
}

fn arb_action() -> impl Strategy<Value = FullAction> {
    proptest::collection::vec(0..RANGE, N_M).prop_map(FullAction::new)
}

fn arb_stats() -> impl Strategy<Value = RuleStats> {
    (-200.0f64..200.0, 0.0f64..50.0, -20i64..60, 0u64..1000).prop_map(|(q, e, i, used_count)| {
        RuleStats { q, e, i, used_count, last_used_step: 0, creation_error: None }
    })
}

fn params() -> LearnerParams {
    LearnerParams::navigation()
}

proptest! {
    #[test]
    fn union_activity_law(v1 in arb_view(), v2 in arb_view(), obs in arb_obs()) {
        if let Some(both) = v1.union(&v2) {
            prop_assert_eq!(
                view_is_active(&both, &obs),
                view_is_active(&v1, &obs) && view_is_active(&v2, &obs)
            );
        }
    }

    #[test]
    fn union_accordance_law(c1 in arb_command(), c2 in arb_command(), a in arb_action()) {
        if let Some(both) = c1.union(&c2) {
            prop_assert_eq!(
                command_accords(&both, &a),
                command_accords(&c1, &a) && command_accords(&c2, &a)
            );
        }
    }

    #[test]
    fn compose_commutes_and_is_idempotent(
        v1 in arb_view(), c1 in arb_command(),
        v2 in arb_view(), c2 in arb_command(),
    ) {
        let w1 = PartialRule::new(1, v1, c1);
        let w2 = PartialRule::new(2, v2, c2);
        match (compose(&w1, &w2, 10), compose(&w2, &w1, 11)) {
            (Ok(a), Ok(b)) => {
                // Commutative up to lexicographic equality of the structure.
                prop_assert_eq!(&a.view, &b.view);
                prop_assert_eq!(&a.command, &b.command);
                // Idempotent: composing a rule with itself changes nothing.
                let aa = compose(&w1, &w1, 12).unwrap();
                prop_assert_eq!(&aa.view, &w1.view);
                prop_assert_eq!(&aa.command, &w1.command);
                // Order is subadditive, equal exactly for disjoint sets.
                prop_assert!(a.order() <= w1.order() + w2.order());
                let disjoint_literals = w1
                    .view
                    .literals()
                    .iter()
                    .all(|l| w2.view.literals().iter().all(|m| m.detector != l.detector));
                let disjoint_motors = w1
                    .command
                    .assignments()
                    .iter()
                    .all(|x| w2.command.assignments().iter().all(|y| y.motor != x.motor));
                if disjoint_literals && disjoint_motors {
                    prop_assert_eq!(a.order(), w1.order() + w2.order());
                }
            }
            (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
            (a, b) => prop_assert!(false, "compose not symmetric: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn confidence_is_monotone_with_range_zero_to_beta(i1 in -50i64..100, i2 in -50i64..100) {
        let p = params();
        let (lo, hi) = if i1 <= i2 { (i1, i2) } else { (i2, i1) };
        prop_assert!(confidence_of(lo, &p) <= confidence_of(hi, &p));
        let c = confidence_of(i1, &p);
        prop_assert!((0.0..=p.beta).contains(&c));
    }

    #[test]
    fn learning_rate_is_antitone_above_zero_with_floor_alpha(i1 in 0i64..200, i2 in 0i64..200) {
        let alpha = 0.1;
        let (lo, hi) = if i1 <= i2 { (i1, i2) } else { (i2, i1) };
        prop_assert!(learning_rate_of(lo, alpha) >= learning_rate_of(hi, alpha));
        let m = learning_rate_of(i1, alpha);
        prop_assert!((alpha..=1.0).contains(&m));
        prop_assert_eq!(m == 1.0, i1 == 0);
    }

    #[test]
    fn learning_rate_is_symmetric_in_the_index(i in -200i64..=200) {
        let alpha = 0.1;
        prop_assert_eq!(learning_rate_of(i, alpha), learning_rate_of(-i, alpha));
        let m = learning_rate_of(i, alpha);
        prop_assert!((alpha..=1.0).contains(&m));
        prop_assert_eq!(m == 1.0, i == 0);
    }

    #[test]
    fn epsilon_is_a_convex_blend(stats in arb_stats(), global in 0.0f64..50.0) {
        let p = params();
        let r = reliability_of(&stats, global, &p);
        let (lo, hi) = (stats.e.min(global), stats.e.max(global));
        prop_assert!(r.epsilon >= lo - 1e-12 && r.epsilon <= hi + 1e-12);
        prop_assert!(r.relevance > 0.0 && r.relevance <= 1.0);
        // Exploration persistence: epsilon never collapses below the
        // unconfident share of the global error.
        prop_assert!(r.epsilon >= (1.0 - p.beta) * global - 1e-12);
    }

    #[test]
    fn relevance_is_antitone_in_epsilon(s1 in arb_stats(), s2 in arb_stats(), global in 0.0f64..50.0) {
        let p = params();
        let r1 = reliability_of(&s1, global, &p);
        let r2 = reliability_of(&s2, global, &p);
        if r1.epsilon <= r2.epsilon {
            prop_assert!(r1.relevance >= r2.relevance);
        }
    }

    #[test]
    fn rule_lines_round_trip(
        view in arb_view(),
        command in arb_command(),
        stats in arb_stats(),
        id in 0u64..10_000,
        parents in proptest::option::of((0u64..500, 0u64..500)),
    ) {
        let rule = PartialRule { id, view, command, stats, parents, frozen: false };
        let mut expected = rule.clone();
        // The line format carries structure and q/e/i; usage and creation
        // error are run-time only.
        expected.stats.used_count = 0;
        expected.stats.creation_error = None;
        let parsed = parse_rule(&render_rule(&rule), 1).unwrap();
        prop_assert_eq!(parsed, expected);
    }
}
