//! Configuration over finite domains with a preference order on solutions.
//!
//! Solutions are enumerated explicitly; everything here is meant for small
//! problems. A tuple holds one domain value per variable.

mod expr;
mod text;

pub use expr::{parse_cond, parse_term, CmpOp, Cond, ExprError, Term, Value};
pub use text::{parse_osd, OsdParseError};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::logic::{ClauseSet, Lit, Solver};

/// Guard on the size of the Cartesian product of the domains.
pub const MAX_TUPLES: u64 = 1_000_000;
/// Guard on the number of variables of a Boolean embedding.
pub const MAX_BOOLEAN_VARS: usize = 20;

pub type Tuple = Vec<Value>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OsdError {
    #[error("{tuples} candidate tuples exceed the limit of {limit}")]
    TooLarge { tuples: u128, limit: u64 },
    #[error("{vars} variables exceed the limit of {limit}")]
    TooManyVars { vars: usize, limit: usize },
    #[error("no solutions")]
    NoSolutions,
    #[error("the preference is not {property}: {first:?} and {second:?}")]
    NotPartialOrder {
        property: &'static str,
        first: Tuple,
        second: Tuple,
    },
    #[error("invalid problem: {0}")]
    Invalid(String),
}

/// Which tuples are solutions.
#[derive(Clone, Debug)]
pub enum Constraint {
    Cond(Cond),
    /// Explicit solution relation.
    Relation(HashSet<Tuple>),
    /// Models of a clause set over its user variables, values 0/1.
    Clauses(Box<ClauseSet>),
}

/// Custom strict preference: `f(a, b)` means `a` is preferred to `b`.
pub type PreferenceFn = Arc<dyn Fn(&[Value], &[Value]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Preference {
    /// No two distinct tuples are comparable.
    None,
    /// `a` is preferred to `b` when every objective is `<=` on `a` and the
    /// tuples differ.
    Pareto(Vec<Term>),
    /// Componentwise `<=` on domain positions; on `{0,1}` domains this is
    /// the subset order on true-sets.
    Componentwise,
    Custom(PreferenceFn),
}

impl fmt::Debug for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preference::None => f.write_str("None"),
            Preference::Pareto(t) => f.debug_tuple("Pareto").field(t).finish(),
            Preference::Componentwise => f.write_str("Componentwise"),
            Preference::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Fixes one variable to one value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub var: usize,
    pub value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueClass {
    /// Appears in no optimal solution.
    NonOptimal,
    /// Appears in every optimal solution.
    Settled,
    Open,
}

impl fmt::Display for ValueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueClass::NonOptimal => "non-optimal",
            ValueClass::Settled => "settled",
            ValueClass::Open => "open",
        })
    }
}

/// Class of every domain value, per variable in domain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueClassification {
    pub classes: Vec<Vec<(Value, ValueClass)>>,
}

impl ValueClassification {
    pub fn class(&self, var: usize, value: Value) -> Option<ValueClass> {
        self.classes[var]
            .iter()
            .find(|(v, _)| *v == value)
            .map(|(_, c)| *c)
    }

    pub fn settled(&self, var: usize) -> Option<Value> {
        self.classes[var]
            .iter()
            .find(|(_, c)| *c == ValueClass::Settled)
            .map(|(v, _)| *v)
    }
}

#[derive(Clone, Debug)]
pub struct OsdProblem {
    names: Vec<String>,
    domains: Vec<Vec<Value>>,
    constraint: Constraint,
    preference: Preference,
}

impl OsdProblem {
    pub fn new(
        names: Vec<String>,
        domains: Vec<Vec<Value>>,
        constraint: Constraint,
        preference: Preference,
    ) -> Result<OsdProblem, OsdError> {
        if names.len() != domains.len() {
            return Err(OsdError::Invalid("one domain per variable".into()));
        }
        let mut seen = HashSet::new();
        for (name, dom) in names.iter().zip(&domains) {
            if !seen.insert(name.as_str()) {
                return Err(OsdError::Invalid(format!("duplicate variable '{name}'")));
            }
            if dom.is_empty() {
                return Err(OsdError::Invalid(format!("empty domain for '{name}'")));
            }
            let distinct: HashSet<_> = dom.iter().collect();
            if distinct.len() != dom.len() {
                return Err(OsdError::Invalid(format!("repeated value in domain of '{name}'")));
            }
        }
        Ok(OsdProblem {
            names,
            domains,
            constraint,
            preference,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn preference(&self) -> &Preference {
        &self.preference
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn tuple_count(&self) -> u128 {
        self.domains.iter().map(|d| d.len() as u128).product()
    }

    /// Solutions satisfying the constraint and every refinement, in
    /// lexicographic order of domain positions with variable 0 most
    /// significant.
    pub fn solutions(&self, refinements: &[Refinement]) -> Result<Vec<Tuple>, OsdError> {
        let count = self.tuple_count();
        if count > MAX_TUPLES as u128 {
            return Err(OsdError::TooLarge {
                tuples: count,
                limit: MAX_TUPLES,
            });
        }
        let mut accepts = self.acceptor();
        let n = self.domains.len();
        let mut pos = vec![0usize; n];
        let mut out = Vec::new();
        loop {
            let tuple: Tuple = pos.iter().zip(&self.domains).map(|(&i, d)| d[i]).collect();
            if refinements.iter().all(|r| tuple[r.var] == r.value) && accepts(&tuple) {
                out.push(tuple);
            }
            // Odometer step, last variable fastest.
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < self.domains[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    fn acceptor(&self) -> Box<dyn FnMut(&[Value]) -> bool + '_> {
        match &self.constraint {
            Constraint::Cond(c) => Box::new(move |t| c.eval(t)),
            Constraint::Relation(r) => Box::new(move |t| r.contains(t)),
            Constraint::Clauses(cs) if !cs.vars().has_aux() => {
                Box::new(move |t| cs.eval(|v| t[v.index()] != 0))
            }
            Constraint::Clauses(cs) => {
                let user = cs.user_vars();
                let mut solver = Solver::new(cs);
                let mut query: Vec<Lit> = Vec::with_capacity(user.len());
                Box::new(move |t| {
                    query.clear();
                    query.extend(user.iter().zip(t).map(|(v, &x)| v.lit(x != 0)));
                    solver.is_sat(&query)
                })
            }
        }
    }

    /// Strict preference: `a` preferred to `b`, `a != b`.
    pub fn prefers(&self, a: &[Value], b: &[Value]) -> bool {
        if a == b {
            return false;
        }
        match &self.preference {
            Preference::None => false,
            Preference::Pareto(objs) => objs.iter().all(|o| o.eval(a) <= o.eval(b)),
            Preference::Componentwise => (0..a.len()).all(|i| self.index(i, a[i]) <= self.index(i, b[i])),
            Preference::Custom(f) => f(a, b),
        }
    }

    fn index(&self, var: usize, value: Value) -> usize {
        self.domains[var]
            .iter()
            .position(|&v| v == value)
            .expect("value outside its domain")
    }

    /// Checks that the preference restricted to `sols` is antisymmetric and
    /// transitive. Pareto can only fail on distinct tuples with equal
    /// objectives; componentwise order and the empty order cannot fail;
    /// custom orders are checked pair by pair and triple by triple.
    pub fn check_order(&self, sols: &[Tuple]) -> Result<(), OsdError> {
        match &self.preference {
            Preference::None | Preference::Componentwise => Ok(()),
            Preference::Pareto(objs) => {
                let mut by_key: HashMap<Vec<Value>, &Tuple> = HashMap::new();
                for t in sols {
                    let key: Vec<Value> = objs.iter().map(|o| o.eval(t)).collect();
                    if let Some(prev) = by_key.insert(key, t) {
                        return Err(OsdError::NotPartialOrder {
                            property: "antisymmetric",
                            first: prev.clone(),
                            second: t.clone(),
                        });
                    }
                }
                Ok(())
            }
            Preference::Custom(_) => {
                for a in sols {
                    for b in sols {
                        if self.prefers(a, b) && self.prefers(b, a) {
                            return Err(OsdError::NotPartialOrder {
                                property: "antisymmetric",
                                first: a.clone(),
                                second: b.clone(),
                            });
                        }
                    }
                }
                for a in sols {
                    for b in sols.iter().filter(|b| self.prefers(a, b)) {
                        for c in sols.iter().filter(|c| self.prefers(b, c)) {
                            if a != c && !self.prefers(a, c) {
                                return Err(OsdError::NotPartialOrder {
                                    property: "transitive",
                                    first: a.clone(),
                                    second: c.clone(),
                                });
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// A key that strictly increases along the (checked) preference, used
    /// to visit solutions so that everything preferred to a tuple comes
    /// before it.
    fn rank(&self, t: &[Value]) -> Option<i128> {
        match &self.preference {
            Preference::Pareto(objs) => Some(objs.iter().map(|o| o.eval(t) as i128).sum()),
            Preference::Componentwise => {
                Some((0..t.len()).map(|i| self.index(i, t[i]) as i128).sum())
            }
            Preference::None | Preference::Custom(_) => None,
        }
    }

    /// The preference-minimal solutions, in solution order.
    pub fn optimal_solutions(&self, refinements: &[Refinement]) -> Result<Vec<Tuple>, OsdError> {
        let sols = self.solutions(refinements)?;
        self.check_order(&sols)?;
        let keep: Vec<bool> = match &self.preference {
            Preference::None => vec![true; sols.len()],
            Preference::Custom(_) => sols
                .iter()
                .map(|t| !sols.iter().any(|o| self.prefers(o, t)))
                .collect(),
            _ => {
                // A tuple is optimal iff no optimal tuple is preferred to it;
                // visiting by rank means all candidates are already known.
                let mut order: Vec<usize> = (0..sols.len()).collect();
                order.sort_by_key(|&i| self.rank(&sols[i]));
                let mut keep = vec![false; sols.len()];
                let mut optimal: Vec<usize> = Vec::new();
                for i in order {
                    if !optimal.iter().any(|&j| self.prefers(&sols[j], &sols[i])) {
                        optimal.push(i);
                        keep[i] = true;
                    }
                }
                keep
            }
        };
        Ok(sols
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(t, _)| t)
            .collect())
    }

    /// Classifies every domain value as non-optimal, settled or open.
    pub fn classify_values(
        &self,
        refinements: &[Refinement],
    ) -> Result<ValueClassification, OsdError> {
        let optimal = self.optimal_solutions(refinements)?;
        if optimal.is_empty() {
            return Err(OsdError::NoSolutions);
        }
        let classes: Vec<Vec<(Value, ValueClass)>> = self
            .domains
            .iter()
            .enumerate()
            .map(|(i, dom)| {
                dom.iter()
                    .map(|&c| {
                        let hits = optimal.iter().filter(|t| t[i] == c).count();
                        let class = if hits == 0 {
                            ValueClass::NonOptimal
                        } else if hits == optimal.len() {
                            ValueClass::Settled
                        } else {
                            ValueClass::Open
                        };
                        (c, class)
                    })
                    .collect()
            })
            .collect();
        // A value is settled iff every other value of its variable is
        // non-optimal.
        for per_var in &classes {
            for &(c, class) in per_var {
                let others_out = per_var
                    .iter()
                    .filter(|(d, _)| *d != c)
                    .all(|(_, k)| *k == ValueClass::NonOptimal);
                assert_eq!(class == ValueClass::Settled, others_out);
            }
        }
        Ok(ValueClassification { classes })
    }

    /// Human-readable classification, one line per variable.
    pub fn describe(&self, cls: &ValueClassification) -> String {
        let mut out = String::new();
        for (name, per_var) in self.names.iter().zip(&cls.classes) {
            let parts: Vec<String> = per_var.iter().map(|(v, c)| format!("{v} {c}")).collect();
            out.push_str(&format!("{name}: {}\n", parts.join(", ")));
        }
        out
    }
}

/// The Boolean problem of a clause set: one `{0,1}` variable per user
/// variable, solutions are the models, and the preference is the subset
/// order on true-sets.
pub fn as_boolean_osd(cs: &ClauseSet) -> Result<OsdProblem, OsdError> {
    let user = cs.user_vars();
    if user.len() > MAX_BOOLEAN_VARS {
        return Err(OsdError::TooManyVars {
            vars: user.len(),
            limit: MAX_BOOLEAN_VARS,
        });
    }
    OsdProblem::new(
        user.iter().map(|&v| cs.vars().name(v).to_owned()).collect(),
        vec![vec![0, 1]; user.len()],
        Constraint::Clauses(Box::new(cs.clone())),
        Preference::Componentwise,
    )
}
