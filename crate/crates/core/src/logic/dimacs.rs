//! DIMACS CNF export and import.
//!
//! Exports carry a `c var <id> <name>` comment per variable so names
//! survive a round trip; imports fall back to the numeric id as the name.

use std::fmt::Write as _;

use thiserror::Error;

use super::cnf::ClauseSet;
use super::var::{Lit, Var, VarTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DimacsError {
    pub line: usize,
    pub message: String,
}

pub fn to_dimacs(cs: &ClauseSet) -> String {
    let vars = cs.vars();
    let mut out = String::new();
    for v in vars.vars() {
        let _ = writeln!(out, "c var {} {}", v.index() + 1, vars.name(v));
    }
    let _ = writeln!(out, "p cnf {} {}", vars.len(), cs.len());
    for clause in cs.clauses() {
        for l in clause {
            let id = l.var().index() as i64 + 1;
            let _ = write!(out, "{} ", if l.is_positive() { id } else { -id });
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<ClauseSet, DimacsError> {
    let err = |line: usize, message: String| DimacsError { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(comment) = line.strip_prefix('c') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("var") {
                let id: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .filter(|&id| id > 0)
                    .ok_or_else(|| err(lineno, "malformed 'c var' line".into()))?;
                let name = parts
                    .next()
                    .ok_or_else(|| err(lineno, "missing variable name".into()))?;
                if names.len() < id {
                    names.resize(id, None);
                }
                names[id - 1] = Some(name.to_owned());
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if header.is_some() || parts.len() != 3 || parts[0] != "cnf" {
                return Err(err(lineno, "malformed problem line".into()));
            }
            let n = parts[1].parse().map_err(|_| err(lineno, "bad variable count".into()))?;
            let m = parts[2].parse().map_err(|_| err(lineno, "bad clause count".into()))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(lineno, "clause before problem line".into()));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(lineno, format!("bad literal '{tok}'")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n {
                return Err(err(lineno, format!("literal {lit} exceeds {n} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(err(0, "missing problem line".into()));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(err(0, format!("expected {m} clauses, found {}", clauses.len())));
    }

    let mut table = VarTable::new();
    names.resize(n, None);
    for (i, name) in names.into_iter().enumerate() {
        let name = name.unwrap_or_else(|| (i + 1).to_string());
        if table.lookup(&name).is_some() {
            return Err(err(0, format!("duplicate variable name '{name}'")));
        }
        if name.starts_with('$') {
            table.add_aux();
        } else {
            table.intern(&name);
        }
    }
    let lits: Vec<Vec<Lit>> = clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|&d| Var::new(d.unsigned_abs() as usize - 1).lit(d > 0))
                .collect()
        })
        .collect();
    Ok(ClauseSet::from_clauses(table, lits))
}
