//! Truth-table oracles. These never touch the solver so tests can use
//! them as an independent reference.

use super::cnf::ClauseSet;
use super::var::{Assignment, Var};
use super::LogicError;

/// Variable guard for [`all_models`].
pub const MAX_ORACLE_VARS: usize = 24;

/// Iterates all `2^n` valuations with variable 0 as the most significant
/// bit, i.e. in lexicographic order of the bit pattern.
fn valuations(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..(1u64 << n)).map(move |bits| (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect())
}

/// Every satisfying total assignment, in lexicographic order of the
/// true-set bit pattern.
pub fn all_models(cs: &ClauseSet) -> Result<Vec<Assignment>, LogicError> {
    let n = cs.num_vars();
    if n > MAX_ORACLE_VARS {
        return Err(LogicError::TooLarge {
            vars: n,
            limit: MAX_ORACLE_VARS,
        });
    }
    Ok(valuations(n)
        .filter(|vals| cs.eval(|v: Var| vals[v.index()]))
        .map(|vals| Assignment::from_bools(&vals))
        .collect())
}

/// Models projected onto the non-auxiliary variables, as sorted and
/// deduplicated true-sets.
pub fn projected_models(cs: &ClauseSet) -> Result<Vec<Vec<Var>>, LogicError> {
    let mut out: Vec<Vec<Var>> = all_models(cs)?
        .iter()
        .map(|m| m.user_true_set(cs.vars()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Models whose true-set (over user variables) has no strict subset that
/// is also a model, in lexicographic order of the bit pattern.
pub fn minimal_models_brute(cs: &ClauseSet) -> Result<Vec<Vec<Var>>, LogicError> {
    let models = projected_models(cs)?;
    let is_subset = |a: &[Var], b: &[Var]| a.iter().all(|v| b.contains(v));
    let mut minimal: Vec<Vec<Var>> = models
        .iter()
        .filter(|m| {
            !models
                .iter()
                .any(|other| other.len() < m.len() && is_subset(other, m))
        })
        .cloned()
        .collect();
    let n = cs.num_vars();
    minimal.sort_by_key(|m| std::cmp::Reverse(Assignment::from_true_set(n, m.iter().copied())));
    minimal.reverse();
    Ok(minimal)
}
