use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use super::expr::Expr;
use super::var::{Lit, Var, VarTable};

/// A conjunction of clauses over a [`VarTable`].
///
/// Clauses are kept normalized: literals sorted by variable, duplicate
/// literals merged, tautologies dropped and identical clauses stored once.
/// An empty clause turns the whole set into the canonical contradiction,
/// which consists of exactly that one empty clause.
#[derive(Clone, Debug)]
pub struct ClauseSet {
    vars: VarTable,
    clauses: Vec<Vec<Lit>>,
    seen: HashSet<Vec<Lit>>,
}

impl PartialEq for ClauseSet {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.clauses == other.clauses
    }
}

impl Eq for ClauseSet {}

impl ClauseSet {
    pub fn new(vars: VarTable) -> ClauseSet {
        ClauseSet {
            vars,
            clauses: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Builds a clause set from literal lists, normalizing each clause.
    pub fn from_clauses<I, C>(vars: VarTable, clauses: I) -> ClauseSet
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[Lit]>,
    {
        let mut cs = ClauseSet::new(vars);
        for c in clauses {
            cs.add_clause(c.as_ref());
        }
        cs
    }

    /// Adds a clause. Returns `false` if it was dropped as a tautology, a
    /// duplicate, or because the set is already contradictory.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if self.is_contradiction() {
            return false;
        }
        let mut clause = lits.to_vec();
        clause.sort();
        clause.dedup();
        if clause.windows(2).any(|w| w[0].var() == w[1].var()) {
            return false;
        }
        if clause.is_empty() {
            self.clauses.clear();
            self.seen.clear();
            self.clauses.push(Vec::new());
            return true;
        }
        if !self.seen.insert(clause.clone()) {
            return false;
        }
        self.clauses.push(clause);
        true
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn user_vars(&self) -> Vec<Var> {
        self.vars.user_vars().collect()
    }

    pub fn is_contradiction(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0].is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.vars.lookup(name)
    }

    /// Registers a new user variable that no clause mentions yet.
    pub fn intern(&mut self, name: &str) -> Var {
        self.vars.intern(name)
    }

    /// Evaluates every clause under a total valuation.
    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| value(l.var()) == l.is_positive()))
    }

    /// Stable in-process identity of the clause content.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.vars.len().hash(&mut h);
        self.clauses.hash(&mut h);
        h.finish()
    }
}

/// Negation normal form with constants folded away except at the root.
#[derive(Clone, Debug)]
enum Nnf {
    Const(bool),
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Nnf {
    fn and(items: Vec<Nnf>) -> Nnf {
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Nnf::Const(true) => {}
                Nnf::Const(false) => return Nnf::Const(false),
                Nnf::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Nnf::Const(true),
            1 => out.pop().unwrap(),
            _ => Nnf::And(out),
        }
    }

    fn or(items: Vec<Nnf>) -> Nnf {
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Nnf::Const(false) => {}
                Nnf::Const(true) => return Nnf::Const(true),
                Nnf::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Nnf::Const(false),
            1 => out.pop().unwrap(),
            _ => Nnf::Or(out),
        }
    }
}

fn nnf(e: &Expr, positive: bool) -> Nnf {
    match e {
        Expr::Const(b) => Nnf::Const(*b == positive),
        Expr::Var(v) => Nnf::Lit(v.lit(positive)),
        Expr::Not(inner) => nnf(inner, !positive),
        Expr::And(es) => {
            let items = es.iter().map(|e| nnf(e, positive)).collect();
            if positive {
                Nnf::and(items)
            } else {
                Nnf::or(items)
            }
        }
        Expr::Or(es) => {
            let items = es.iter().map(|e| nnf(e, positive)).collect();
            if positive {
                Nnf::or(items)
            } else {
                Nnf::and(items)
            }
        }
        Expr::Implies(a, b) => {
            if positive {
                Nnf::or(vec![nnf(a, false), nnf(b, true)])
            } else {
                Nnf::and(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Expr::Iff(a, b) => {
            if positive {
                Nnf::and(vec![
                    Nnf::or(vec![nnf(a, false), nnf(b, true)]),
                    Nnf::or(vec![nnf(a, true), nnf(b, false)]),
                ])
            } else {
                Nnf::and(vec![
                    Nnf::or(vec![nnf(a, true), nnf(b, true)]),
                    Nnf::or(vec![nnf(a, false), nnf(b, false)]),
                ])
            }
        }
    }
}

/// Largest clause count a single conjunct may expand to by distribution
/// before it is encoded structurally instead.
const DISTRIBUTION_LIMIT: usize = 16;

fn distribute(n: &Nnf) -> Option<Vec<Vec<Lit>>> {
    match n {
        Nnf::Const(true) => Some(Vec::new()),
        Nnf::Const(false) => Some(vec![Vec::new()]),
        Nnf::Lit(l) => Some(vec![vec![*l]]),
        Nnf::And(items) => {
            let mut out = Vec::new();
            for item in items {
                out.extend(distribute(item)?);
                if out.len() > DISTRIBUTION_LIMIT {
                    return None;
                }
            }
            Some(out)
        }
        Nnf::Or(items) => {
            let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
            for item in items {
                let part = distribute(item)?;
                if acc.len() * part.len() > DISTRIBUTION_LIMIT {
                    return None;
                }
                acc = acc
                    .iter()
                    .flat_map(|a| {
                        part.iter().map(move |p| {
                            let mut c = a.clone();
                            c.extend_from_slice(p);
                            c
                        })
                    })
                    .collect();
            }
            Some(acc)
        }
    }
}

/// Returns a literal equivalent to `n`, defining auxiliary variables as
/// needed. `n` must not be a constant.
fn encode(n: &Nnf, cs: &mut ClauseSet) -> Lit {
    match n {
        Nnf::Lit(l) => *l,
        Nnf::Const(_) => unreachable!("constants are folded before encoding"),
        Nnf::And(items) => {
            let lits: Vec<Lit> = items.iter().map(|i| encode(i, cs)).collect();
            let t = cs.vars.add_aux().pos();
            for &l in &lits {
                cs.add_clause(&[!t, l]);
            }
            let mut back: Vec<Lit> = lits.iter().map(|&l| !l).collect();
            back.push(t);
            cs.add_clause(&back);
            t
        }
        Nnf::Or(items) => {
            let lits: Vec<Lit> = items.iter().map(|i| encode(i, cs)).collect();
            let t = cs.vars.add_aux().pos();
            for &l in &lits {
                cs.add_clause(&[t, !l]);
            }
            let mut fwd = lits;
            fwd.push(!t);
            cs.add_clause(&fwd);
            t
        }
    }
}

fn add_conjunct(n: &Nnf, cs: &mut ClauseSet) {
    if let Some(clauses) = distribute(n) {
        for c in clauses {
            cs.add_clause(&c);
        }
        return;
    }
    match n {
        Nnf::And(items) => items.iter().for_each(|i| add_conjunct(i, cs)),
        Nnf::Or(items) => {
            let clause: Vec<Lit> = items.iter().map(|i| encode(i, cs)).collect();
            cs.add_clause(&clause);
        }
        // Constants and literals always distribute.
        Nnf::Const(_) | Nnf::Lit(_) => unreachable!(),
    }
}

/// Converts an expression to clausal form.
///
/// Conjuncts that expand to at most a handful of clauses are distributed
/// directly; anything larger gets fully-defined auxiliary variables
/// (`t <-> subformula`), which keeps the model set identical once
/// projected onto the original variables. Auxiliary variables are flagged
/// in the returned table.
pub fn to_cnf(expr: &Expr, vars: &VarTable) -> ClauseSet {
    let mut cs = ClauseSet::new(vars.clone());
    for conjunct in expr.conjuncts() {
        let n = nnf(conjunct, true);
        add_conjunct(&n, &mut cs);
        if cs.is_contradiction() {
            break;
        }
    }
    cs
}
