#![allow(dead_code)]

use confik_core::logic::{parse_expr, solve, to_cnf, ClauseSet, Expr, Lit, Var, VarTable};
use proptest::prelude::*;

pub fn names(n: usize) -> VarTable {
    VarTable::from_names((0..n).map(|i| format!("v{i}"))).unwrap()
}

/// Random clause sets of widths 1..=4 over `1..=max_vars` variables.
pub fn clause_set(max_vars: usize) -> impl Strategy<Value = ClauseSet> {
    (1..=max_vars).prop_flat_map(|n| {
        let lit = (0..n, any::<bool>()).prop_map(|(i, b)| Var::new(i).lit(b));
        let clause = prop::collection::vec(lit, 1..=4);
        prop::collection::vec(clause, 0..=2 * n)
            .prop_map(move |cls: Vec<Vec<Lit>>| ClauseSet::from_clauses(names(n), cls))
    })
}

pub fn sat_clause_set(max_vars: usize) -> impl Strategy<Value = ClauseSet> {
    clause_set(max_vars).prop_filter("satisfiable", |cs| solve(cs, &[]).is_sat())
}

pub fn expr(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Expr::Const),
        6 => (0..n).prop_map(|i| Expr::Var(Var::new(i))),
    ];
    leaf.prop_recursive(4, 40, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Expr::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::iff(a, b)),
        ]
    })
}

/// Clause set of a formula written over the given names.
pub fn formula(vars: &[&str], src: &str) -> ClauseSet {
    let t = VarTable::from_names(vars.iter().copied()).unwrap();
    to_cnf(&parse_expr(src, |n| t.lookup(n)).unwrap(), &t)
}

pub fn set_names(cs: &ClauseSet, vs: &[Var]) -> Vec<String> {
    vs.iter().map(|&v| cs.vars().name(v).to_owned()).collect()
}

pub const SAMPLE: &str = "\
feature x
  feature y mandatory
    xor
      feature a
      feature b
  feature c
  feature d
";

pub const SHOPPING_DEMO: &str = "\
feature root
  feature u
  feature v
  feature x
  feature y
constraint u | v
constraint x -> y
";

/// Every satisfying valuation, variable 0 most significant, ascending.
pub fn truth_table(cs: &ClauseSet) -> Vec<Vec<bool>> {
    let n = cs.num_vars();
    assert!(n <= 20);
    (0u32..1 << n)
        .map(|bits| (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect::<Vec<bool>>())
        .filter(|vals| {
            cs.clauses()
                .iter()
                .all(|c| c.iter().any(|l| vals[l.var().index()] == l.is_positive()))
        })
        .collect()
}

/// True-sets over user variables, deduplicated.
pub fn user_models(cs: &ClauseSet) -> Vec<Vec<Var>> {
    let mut out: Vec<Vec<Var>> = truth_table(cs)
        .iter()
        .map(|m| {
            cs.user_vars()
                .into_iter()
                .filter(|v| m[v.index()])
                .collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Subset-minimal members of a family of sorted sets.
pub fn minimal_members(family: &[Vec<Var>]) -> Vec<Vec<Var>> {
    let subset = |a: &[Var], b: &[Var]| a.iter().all(|v| b.binary_search(v).is_ok());
    let mut out: Vec<Vec<Var>> = family
        .iter()
        .filter(|m| !family.iter().any(|o| o.len() < m.len() && subset(o, m)))
        .cloned()
        .collect();
    out.sort();
    out
}
