//! Deselectable sets, dispensable variables and minimal models.
//!
//! A set `X` is deselectable when all of `X` can be set false at once. A
//! variable is dispensable when deselecting it keeps every deselectable set
//! deselectable; equivalently it is false in every minimal model, which is
//! how [`dispensable_vars`] computes it. The [`oracle`] module evaluates the
//! other characterizations literally for cross-checking.

pub mod oracle;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::logic::{backbone, ClauseSet, Lit, LogicError, Solver, Var};

pub use oracle::{dispensable_brute, free_of_negation, maximal_deselectable_sets};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReasoningError {
    #[error("the formula is unsatisfiable")]
    UnsatInput,
    #[error("{vars} variables exceed the brute-force limit of {limit}")]
    TooLarge { vars: usize, limit: usize },
    #[error("more than {limit} minimal models")]
    LimitExceeded { limit: usize },
}

impl From<LogicError> for ReasoningError {
    fn from(e: LogicError) -> Self {
        match e {
            LogicError::UnsatContext => ReasoningError::UnsatInput,
            LogicError::TooLarge { vars, limit } => ReasoningError::TooLarge { vars, limit },
        }
    }
}

/// `SAT(cs ∧ ⋀_{v∈X} ¬v)`.
pub fn is_deselectable(cs: &ClauseSet, set: &[Var]) -> bool {
    let assumptions: Vec<Lit> = set.iter().map(|v| v.neg()).collect();
    Solver::new(cs).is_sat(&assumptions)
}

/// The ⊆-minimal models of a formula over its non-auxiliary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModelSet {
    /// True-sets, each sorted by variable id, ordered lexicographically by
    /// bit pattern (variable 0 most significant).
    models: Vec<Vec<Var>>,
    source: u64,
}

impl MinimalModelSet {
    pub fn models(&self) -> &[Vec<Var>] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    /// Fingerprint of the clause set and assumptions enumerated.
    pub fn source(&self) -> u64 {
        self.source
    }

    /// Variables true in at least one minimal model, sorted.
    pub fn union(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self.models.iter().flatten().copied().collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Orders true-sets by their bit pattern `b_0 b_1 ...` with `false < true`.
pub(crate) fn bit_pattern_cmp(a: &[Var], b: &[Var]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            // The set holding the smaller id has a 1 where the other has 0.
            return y.cmp(x);
        }
    }
    a.len().cmp(&b.len())
}

/// Enumerates minimal models of a solver's clauses under fixed assumptions.
///
/// Each round (1) finds any model, (2) shrinks it while a model with a
/// strictly smaller true-set exists, asking for one that keeps every false
/// variable false and drops at least one true variable, and (3) stops at a
/// minimal model. Every shrink asks through the clause `⋁ ¬v` over the
/// current true variables and keeps it: a set that shrank is not minimal,
/// so no minimal model contains it, and the final set is the one to block
/// anyway. The clause database only grows, so clauses learned by the
/// enumerator's own solver survive for the whole enumeration.
struct MinimalModelSearch<'a> {
    solver: Solver,
    assumptions: &'a [Lit],
    user: Vec<Var>,
    exhausted: bool,
}

impl<'a> MinimalModelSearch<'a> {
    fn new(cs: &ClauseSet, assumptions: &'a [Lit]) -> Self {
        MinimalModelSearch {
            solver: Solver::new(cs),
            assumptions,
            user: cs.user_vars(),
            exhausted: false,
        }
    }

    fn next(&mut self) -> Option<Vec<Var>> {
        if self.exhausted {
            return None;
        }
        let mut model = self.solver.solve(self.assumptions)?;
        loop {
            let trues: Vec<Var> = self.user.iter().copied().filter(|v| model[v.index()]).collect();
            if trues.is_empty() {
                // Below every other model, so the only minimal one.
                self.exhausted = true;
                return Some(trues);
            }
            let mut query = self.assumptions.to_vec();
            query.extend(
                self.user
                    .iter()
                    .filter(|v| !model[v.index()])
                    .map(|v| v.neg()),
            );
            let shrink: Vec<Lit> = trues.iter().map(|v| v.neg()).collect();
            self.solver.add_clause(&shrink);
            match self.solver.solve(&query) {
                Some(m) => model = m,
                None => return Some(trues),
            }
        }
    }
}

fn fingerprint(cs: &ClauseSet, assumptions: &[Lit]) -> u64 {
    let mut h = DefaultHasher::new();
    cs.fingerprint().hash(&mut h);
    assumptions.hash(&mut h);
    h.finish()
}

/// All minimal models of `cs`.
pub fn enumerate_minimal_models(cs: &ClauseSet) -> Result<MinimalModelSet, ReasoningError> {
    minimal_models_under(cs, &[], None)
}

/// Minimal models of `cs` conjoined with the assumption literals. With a
/// `limit`, enumeration stops with [`ReasoningError::LimitExceeded`] once
/// more than `limit` models have been found.
pub fn minimal_models_under(
    cs: &ClauseSet,
    assumptions: &[Lit],
    limit: Option<usize>,
) -> Result<MinimalModelSet, ReasoningError> {
    let mut search = MinimalModelSearch::new(cs, assumptions);
    let mut models = Vec::new();
    while let Some(m) = search.next() {
        models.push(m);
        if limit.is_some_and(|l| models.len() > l) {
            return Err(ReasoningError::LimitExceeded {
                limit: limit.unwrap(),
            });
        }
    }
    if models.is_empty() {
        return Err(ReasoningError::UnsatInput);
    }
    models.sort_by(|a, b| bit_pattern_cmp(a, b));
    Ok(MinimalModelSet {
        models,
        source: fingerprint(cs, assumptions),
    })
}

/// Dispensable and forced variables of a formula.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DispensabilityReport {
    /// False in every minimal model.
    pub dispensable: Vec<Var>,
    /// True in every model.
    pub forced_true: Vec<Var>,
    /// False in every model (always a subset of `dispensable`).
    pub forced_false: Vec<Var>,
    /// Neither forced nor dispensable, excluding assumed variables.
    pub needs_attention: Vec<Var>,
}

/// Dispensability report for `cs`.
pub fn dispensable_vars(cs: &ClauseSet) -> Result<DispensabilityReport, ReasoningError> {
    dispensable_under(cs, &[])
}

/// Dispensability report for `cs` conjoined with the assumptions.
///
/// Minimal models are enumerated only until every variable that could
/// still be true has shown up true in one of them; the remaining minimal
/// models cannot change the answer.
pub fn dispensable_under(
    cs: &ClauseSet,
    assumptions: &[Lit],
) -> Result<DispensabilityReport, ReasoningError> {
    let user = cs.user_vars();
    let n = cs.num_vars();
    let mut assumed = vec![None; n];
    for a in assumptions {
        assumed[a.var().index()] = Some(a.value());
    }
    let mut seen_true = vec![false; n];
    let mut open = user.iter().filter(|v| assumed[v.index()] != Some(false)).count();
    let mut search = MinimalModelSearch::new(cs, assumptions);
    while open > 0 {
        let Some(m) = search.next() else { break };
        for v in m {
            if !seen_true[v.index()] {
                seen_true[v.index()] = true;
                open -= 1;
            }
        }
    }
    // Fails with UnsatInput when there is no model at all.
    let forced = backbone(&mut Solver::new(cs), assumptions, &user)?;
    let mut report = DispensabilityReport::default();
    let mut is_forced = vec![false; n];
    for l in forced {
        is_forced[l.var().index()] = true;
        if l.is_positive() {
            report.forced_true.push(l.var());
        } else {
            report.forced_false.push(l.var());
        }
    }
    for &v in &user {
        if !seen_true[v.index()] {
            report.dispensable.push(v);
        } else if !is_forced[v.index()] && assumed[v.index()].is_none() {
            report.needs_attention.push(v);
        }
    }
    report.forced_true.sort();
    report.forced_false.sort();
    Ok(report)
}

/// Classification of a variable under the subset preference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Settled {
    /// Dispensable: false in every minimal model.
    False,
    /// True in every model.
    True,
    Unsettled,
}

/// Per user variable, in id order.
pub fn settled_status(cs: &ClauseSet) -> Result<Vec<(Var, Settled)>, ReasoningError> {
    let report = dispensable_vars(cs)?;
    Ok(cs
        .user_vars()
        .into_iter()
        .map(|v| {
            let s = if report.dispensable.contains(&v) {
                Settled::False
            } else if report.forced_true.contains(&v) {
                Settled::True
            } else {
                Settled::Unsettled
            };
            (v, s)
        })
        .collect())
}
