//! Literal evaluations of the alternative characterizations of
//! dispensability. Exponential in the number of variables; meant for
//! cross-checking on small formulas.
//!
//! Sets of user variables are bitmasks: the `k`-th user variable (in id
//! order) is bit `k`.

use super::ReasoningError;
use crate::logic::oracle::projected_models;
use crate::logic::{ClauseSet, Lit, Solver, Var};

/// Guard on the number of user variables.
pub const MAX_BRUTE_VARS: usize = 16;

struct Universe {
    user: Vec<Var>,
}

impl Universe {
    fn new(cs: &ClauseSet) -> Result<Universe, ReasoningError> {
        let user = cs.user_vars();
        if user.len() > MAX_BRUTE_VARS {
            return Err(ReasoningError::TooLarge {
                vars: user.len(),
                limit: MAX_BRUTE_VARS,
            });
        }
        Ok(Universe { user })
    }

    fn full(&self) -> usize {
        (1usize << self.user.len()) - 1
    }

    fn bit(&self, v: Var) -> usize {
        let k = self
            .user
            .iter()
            .position(|&u| u == v)
            .expect("not a user variable");
        1 << k
    }

    fn vars_of(&self, mask: usize) -> Vec<Var> {
        self.user
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    }
}

/// `table[X]` = `D(cs, X)`, evaluated from the truth table: some model has
/// every variable of `X` false.
fn deselectable_table(cs: &ClauseSet, u: &Universe) -> Result<Vec<bool>, ReasoningError> {
    let full = u.full();
    // below[S]: some model's true-set is a subset of S.
    let mut below = vec![false; full + 1];
    for m in projected_models(cs)? {
        let mask = m.iter().fold(0, |acc, &v| acc | u.bit(v));
        below[mask] = true;
    }
    for k in 0..u.user.len() {
        for s in 0..=full {
            if s >> k & 1 == 1 && below[s ^ (1 << k)] {
                below[s] = true;
            }
        }
    }
    Ok((0..=full).map(|x| below[full & !x]).collect())
}

/// Dispensability by its definition: for every `X ⊆ 𝒱`, `D(cs, X)` implies
/// `D(cs ∧ ¬v, X)`, the latter being `D(cs, X ∪ {v})`.
pub fn dispensable_brute(cs: &ClauseSet, v: Var) -> Result<bool, ReasoningError> {
    let u = Universe::new(cs)?;
    let table = deselectable_table(cs, &u)?;
    let bit = u.bit(v);
    Ok((0..=u.full()).all(|x| !table[x] || table[x | bit]))
}

/// `{ v | dispensable_brute(cs, v) }`, sharing one truth table.
pub fn dispensable_brute_all(cs: &ClauseSet) -> Result<Vec<Var>, ReasoningError> {
    let u = Universe::new(cs)?;
    let table = deselectable_table(cs, &u)?;
    Ok(u.user
        .iter()
        .copied()
        .filter(|&v| {
            let bit = u.bit(v);
            (0..=u.full()).all(|x| !table[x] || table[x | bit])
        })
        .collect())
}

/// `not_entailed[B]` = `cs ⊭ ⋁B` for every positive clause `B`, including
/// the empty one, decided by SAT calls on `cs ∧ ⋀_{b∈B} ¬b`.
fn non_entailment_table(cs: &ClauseSet, u: &Universe) -> Vec<bool> {
    let mut solver = Solver::new(cs);
    (0..=u.full())
        .map(|b| {
            let negated: Vec<Lit> = u.vars_of(b).iter().map(|v| v.neg()).collect();
            solver.is_sat(&negated)
        })
        .collect()
}

/// GCWA: `v` is free of negation iff for every positive clause `B` with
/// `cs ⊭ B`, also `cs ⊭ v ∨ B`. The empty clause stands for plain `cs ⊭ v`.
pub fn free_of_negation(cs: &ClauseSet, v: Var) -> Result<bool, ReasoningError> {
    let u = Universe::new(cs)?;
    let table = non_entailment_table(cs, &u);
    let bit = u.bit(v);
    Ok((0..=u.full()).all(|b| !table[b] || table[b | bit]))
}

/// Every user variable free of negation, sharing one entailment table.
pub fn free_of_negation_all(cs: &ClauseSet) -> Result<Vec<Var>, ReasoningError> {
    let u = Universe::new(cs)?;
    let table = non_entailment_table(cs, &u);
    Ok(u.user
        .iter()
        .copied()
        .filter(|&v| {
            let bit = u.bit(v);
            (0..=u.full()).all(|b| !table[b] || table[b | bit])
        })
        .collect())
}

/// All ⊆-maximal deselectable sets, sorted by bit pattern. Deselectability
/// is downward closed, so a deselectable set is maximal iff no single
/// variable can be added.
pub fn maximal_deselectable_sets(cs: &ClauseSet) -> Result<Vec<Vec<Var>>, ReasoningError> {
    let u = Universe::new(cs)?;
    let table = deselectable_table(cs, &u)?;
    let n = u.user.len();
    let mut out: Vec<Vec<Var>> = (0..=u.full())
        .filter(|&x| table[x] && (0..n).all(|k| x >> k & 1 == 1 || !table[x | 1 << k]))
        .map(|x| u.vars_of(x))
        .collect();
    out.sort_by(|a, b| super::bit_pattern_cmp(a, b));
    Ok(out)
}

/// Intersection of all maximal deselectable sets.
pub fn maximal_sets_intersection(cs: &ClauseSet) -> Result<Vec<Var>, ReasoningError> {
    let sets = maximal_deselectable_sets(cs)?;
    let Some((first, rest)) = sets.split_first() else {
        return Err(ReasoningError::UnsatInput);
    };
    Ok(first
        .iter()
        .copied()
        .filter(|v| rest.iter().all(|s| s.contains(v)))
        .collect())
}
