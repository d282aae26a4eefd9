//! Text format for finite-domain problems:
//!
//! ```text
//! var x in {0,1}
//! var y in {0,1}
//! var z in {0,1}
//! constraint x + y + z > 0
//! prefer pareto(10*x + 5*y + 20*z, x + 2*y + 3*z)
//! ```
//!
//! Variables come first. Several `constraint` lines are conjoined. The
//! preference is `pareto(...)` over one or more objectives to minimize,
//! `subset` (componentwise order on domain positions) or `none`, the
//! default.

use thiserror::Error;

use super::expr::{parse_cond, parse_term, Cond, ExprError};
use super::{Constraint, OsdError, OsdProblem, Preference, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct OsdParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn fail<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, OsdParseError> {
    Err(OsdParseError {
        line,
        column,
        message: message.into(),
    })
}

fn shift(line: usize, offset: usize) -> impl Fn(ExprError) -> OsdParseError {
    move |e| OsdParseError {
        line,
        column: offset + e.column,
        message: e.message,
    }
}

/// Splits on top-level commas, returning each piece with its byte offset.
fn split_args(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_domain(line: usize, column: usize, text: &str) -> Result<Vec<Value>, OsdParseError> {
    let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) else {
        return fail(line, column, "expected a domain like {0,1,2}");
    };
    let mut values = Vec::new();
    for part in inner.split(',') {
        match part.trim().parse::<Value>() {
            Ok(v) if !values.contains(&v) => values.push(v),
            Ok(v) => return fail(line, column, format!("value {v} repeated")),
            Err(_) => return fail(line, column, format!("'{}' is not an integer", part.trim())),
        }
    }
    Ok(values)
}

pub fn parse_osd(text: &str) -> Result<OsdProblem, OsdParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut domains: Vec<Vec<Value>> = Vec::new();
    let mut constraint: Option<Cond> = None;
    let mut preference: Option<Preference> = None;
    let mut past_vars = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let body = content.trim_start();
        if body.trim().is_empty() {
            continue;
        }
        let indent = content.len() - body.len();
        let column = indent + 1;
        let keyword = body.split_whitespace().next().unwrap_or_default();
        let rest = body[keyword.len()..].trim();
        let rest_offset = indent + body.len() - body[keyword.len()..].trim_start().len();
        let resolve = |n: &str| names.iter().position(|m| m == n);
        match keyword {
            "var" => {
                if past_vars {
                    return fail(line, column, "variables must be declared first");
                }
                let Some((name, dom)) = rest.split_once(" in ") else {
                    return fail(line, column, "expected 'var <name> in {...}'");
                };
                let name = name.trim();
                if name.is_empty()
                    || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.')
                    || name.starts_with(|c: char| c.is_ascii_digit())
                    || name == "true"
                    || name == "false"
                {
                    return fail(line, column, format!("invalid variable name '{name}'"));
                }
                if names.iter().any(|n| n == name) {
                    return fail(line, column, format!("duplicate variable '{name}'"));
                }
                let values = parse_domain(line, column, dom.trim())?;
                names.push(name.to_owned());
                domains.push(values);
            }
            "constraint" => {
                past_vars = true;
                if rest.is_empty() {
                    return fail(line, column, "empty constraint");
                }
                let c = parse_cond(rest, resolve).map_err(shift(line, rest_offset))?;
                constraint = Some(match constraint {
                    None => c,
                    Some(prev) => Cond::And(Box::new(prev), Box::new(c)),
                });
            }
            "prefer" => {
                past_vars = true;
                if preference.is_some() {
                    return fail(line, column, "only one preference line is allowed");
                }
                let pref = if rest == "none" {
                    Preference::None
                } else if rest == "subset" {
                    Preference::Componentwise
                } else if let Some(args) = rest.strip_prefix("pareto(").and_then(|r| r.strip_suffix(')')) {
                    let base = rest_offset + "pareto(".len();
                    let mut objs = Vec::new();
                    for (off, arg) in split_args(args) {
                        if arg.trim().is_empty() {
                            return fail(line, base + off + 1, "empty objective");
                        }
                        objs.push(parse_term(arg, resolve).map_err(shift(line, base + off))?);
                    }
                    Preference::Pareto(objs)
                } else {
                    return fail(line, rest_offset + 1, "expected pareto(...), subset or none");
                };
                preference = Some(pref);
            }
            other => return fail(line, column, format!("unknown keyword '{other}'")),
        }
    }
    if names.is_empty() {
        return fail(1, 1, "no variables declared");
    }
    OsdProblem::new(
        names,
        domains,
        Constraint::Cond(constraint.unwrap_or(Cond::Const(true))),
        preference.unwrap_or(Preference::None),
    )
    .map_err(|e| match e {
        OsdError::Invalid(message) => OsdParseError {
            line: 1,
            column: 1,
            message,
        },
        other => OsdParseError {
            line: 1,
            column: 1,
            message: other.to_string(),
        },
    })
}
