mod common;

use common::{expr, formula, minimal_members, names, sat_clause_set, set_names, user_models};
use confik_core::logic::oracle::minimal_models_brute;
use confik_core::logic::{to_cnf, ClauseSet, Var};
use confik_core::reasoning::oracle::{dispensable_brute_all, free_of_negation_all, maximal_sets_intersection};
use confik_core::reasoning::{
    dispensable_under, dispensable_vars, enumerate_minimal_models, is_deselectable, settled_status, Settled,
};
use proptest::prelude::*;

/// User variables false in every minimal model, from the truth table.
fn dispensable_by_table(cs: &ClauseSet) -> Vec<Var> {
    let minimal = minimal_members(&user_models(cs));
    cs.user_vars()
        .into_iter()
        .filter(|v| minimal.iter().all(|m| !m.contains(v)))
        .collect()
}

fn sorted(mut family: Vec<Vec<Var>>) -> Vec<Vec<Var>> {
    family.sort();
    family
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn four_way_dispensability(cs in sat_clause_set(12)) {
        let report = dispensable_vars(&cs).unwrap();
        let brute = dispensable_brute_all(&cs).unwrap();
        let gcwa = free_of_negation_all(&cs).unwrap();
        let maximal = maximal_sets_intersection(&cs).unwrap();
        prop_assert_eq!(&report.dispensable, &brute);
        prop_assert_eq!(&report.dispensable, &gcwa);
        prop_assert_eq!(&report.dispensable, &maximal);
        prop_assert_eq!(&report.dispensable, &dispensable_by_table(&cs));
    }

    #[test]
    fn dispensable_set_deselectable_at_once(cs in sat_clause_set(12)) {
        let d = dispensable_vars(&cs).unwrap().dispensable;
        prop_assert!(is_deselectable(&cs, &d));
        prop_assert!(user_models(&cs).iter().any(|m| m.iter().all(|v| !d.contains(v))));
    }

    #[test]
    fn minimal_models_match_filter(cs in sat_clause_set(15)) {
        let got = enumerate_minimal_models(&cs).unwrap();
        let expected = minimal_members(&user_models(&cs));
        prop_assert_eq!(sorted(got.models().to_vec()), expected.clone());
        prop_assert_eq!(got.models(), &minimal_models_brute(&cs).unwrap()[..]);
        // Every model lies above some minimal one.
        for m in user_models(&cs) {
            prop_assert!(expected.iter().any(|k| k.iter().all(|v| m.contains(v))));
        }
    }

    #[test]
    fn minimal_models_ignore_auxiliaries((n, e) in (2usize..=8).prop_flat_map(|n| (Just(n), expr(n)))) {
        let cs = to_cnf(&e, &names(n));
        prop_assume!(cs.num_vars() <= 20 && !user_models(&cs).is_empty());
        let got = enumerate_minimal_models(&cs).unwrap();
        prop_assert_eq!(sorted(got.models().to_vec()), minimal_members(&user_models(&cs)));
        prop_assert_eq!(dispensable_vars(&cs).unwrap().dispensable, dispensable_by_table(&cs));
    }

    #[test]
    fn report_shape(cs in sat_clause_set(12)) {
        let r = dispensable_vars(&cs).unwrap();
        let models = user_models(&cs);
        for v in cs.user_vars() {
            let always = models.iter().all(|m| m.contains(&v));
            let never = models.iter().all(|m| !m.contains(&v));
            prop_assert_eq!(r.forced_true.contains(&v), always);
            prop_assert_eq!(r.forced_false.contains(&v), never);
            let neither = !always && !never && !r.dispensable.contains(&v);
            prop_assert_eq!(r.needs_attention.contains(&v), neither);
        }
        prop_assert!(r.forced_false.iter().all(|v| r.dispensable.contains(v)));
        prop_assert!(r.forced_true.iter().all(|v| !r.dispensable.contains(v)));
        let settled = settled_status(&cs).unwrap();
        for (v, s) in settled {
            let expected = if r.dispensable.contains(&v) {
                Settled::False
            } else if r.forced_true.contains(&v) {
                Settled::True
            } else {
                Settled::Unsettled
            };
            prop_assert_eq!(s, expected);
        }
    }

    #[test]
    fn assumptions_equal_unit_clauses(
        (cs, fixed) in sat_clause_set(10).prop_flat_map(|cs| {
            let n = cs.num_vars();
            (Just(cs), prop::collection::vec((0..n, any::<bool>()), 0..=3))
        })
    ) {
        let mut lits = Vec::new();
        let mut strengthened = cs.clone();
        for (i, b) in fixed {
            if lits.iter().any(|l: &confik_core::Lit| l.var().index() == i) {
                continue;
            }
            lits.push(Var::new(i).lit(b));
            strengthened.add_clause(&[Var::new(i).lit(b)]);
        }
        prop_assume!(!user_models(&strengthened).is_empty());
        let under = dispensable_under(&cs, &lits).unwrap();
        let direct = dispensable_vars(&strengthened).unwrap();
        prop_assert_eq!(under.dispensable, direct.dispensable);
        prop_assert_eq!(under.forced_true, direct.forced_true);
        prop_assert_eq!(under.forced_false, direct.forced_false);
    }
}

#[test]
fn true_and_false_are_treated_asymmetrically() {
    let cs = formula(&["u", "v", "x", "y"], "(u | v) & (x -> y)");
    let v = |n: &str| cs.lookup(n).unwrap();
    let mut no_y = cs.clone();
    no_y.add_clause(&[v("y").neg()]);
    let r = dispensable_vars(&no_y).unwrap();
    assert_eq!(set_names(&no_y, &r.forced_false), ["x", "y"]);
    assert_eq!(set_names(&no_y, &r.dispensable), ["x", "y"]);
    let mut no_u = cs.clone();
    no_u.add_clause(&[v("u").neg()]);
    let r = dispensable_vars(&no_u).unwrap();
    assert_eq!(set_names(&no_u, &r.forced_true), ["v"]);
    assert!(!dispensable_vars(&cs).unwrap().dispensable.contains(&v("u")));
}
