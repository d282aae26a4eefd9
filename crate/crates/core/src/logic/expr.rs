use std::fmt;

use thiserror::Error;

use super::var::{Var, VarTable};

/// Propositional expression tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Const(bool),
    Var(Var),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn implies(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Expr, rhs: Expr) -> Expr {
        Expr::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Evaluates under a total valuation.
    pub fn eval(&self, value: &impl Fn(Var) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(v) => value(*v),
            Expr::Not(e) => !e.eval(value),
            Expr::And(es) => es.iter().all(|e| e.eval(value)),
            Expr::Or(es) => es.iter().any(|e| e.eval(value)),
            Expr::Implies(a, b) => !a.eval(value) || b.eval(value),
            Expr::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Variables occurring in the expression, sorted and deduplicated.
    pub fn vars(&self) -> Vec<Var> {
        fn walk(e: &Expr, out: &mut Vec<Var>) {
            match e {
                Expr::Const(_) => {}
                Expr::Var(v) => out.push(*v),
                Expr::Not(e) => walk(e, out),
                Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| walk(e, out)),
                Expr::Implies(a, b) | Expr::Iff(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Top-level conjuncts, flattening nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
            match e {
                Expr::And(es) => es.iter().for_each(|e| walk(e, out)),
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, vars }
    }
}

/// Prints an expression in the constraint grammar, parenthesizing just
/// enough for [`parse_expr`] to rebuild the same tree.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    vars: &'a VarTable,
}

// Binding strength, low to high.
const PREC_IFF: u8 = 0;
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Iff(..) => PREC_IFF,
        Expr::Implies(..) => PREC_IMP,
        Expr::Or(es) if es.len() >= 2 => PREC_OR,
        Expr::And(es) if es.len() >= 2 => PREC_AND,
        Expr::Not(_) => PREC_NOT,
        _ => PREC_ATOM,
    }
}

impl ExprDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
        let p = prec(e);
        if p < min_prec {
            write!(f, "(")?;
            self.write(f, e, 0)?;
            return write!(f, ")");
        }
        match e {
            Expr::Const(b) => write!(f, "{b}"),
            Expr::Var(v) => write!(f, "{}", self.vars.name(*v)),
            Expr::Not(inner) => {
                write!(f, "!")?;
                self.write(f, inner, PREC_NOT)
            }
            Expr::And(es) | Expr::Or(es) if es.is_empty() => {
                write!(f, "{}", matches!(e, Expr::And(_)))
            }
            Expr::And(es) | Expr::Or(es) if es.len() == 1 => self.write(f, &es[0], min_prec),
            Expr::And(es) | Expr::Or(es) => {
                let sep = if matches!(e, Expr::And(_)) { " & " } else { " | " };
                for (i, child) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    self.write(f, child, p + 1)?;
                }
                Ok(())
            }
            Expr::Implies(a, b) => {
                self.write(f, a, PREC_IMP + 1)?;
                write!(f, " -> ")?;
                self.write(f, b, PREC_IMP)
            }
            Expr::Iff(a, b) => {
                self.write(f, a, PREC_IFF)?;
                write!(f, " <-> ")?;
                self.write(f, b, PREC_IFF + 1)
            }
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr, 0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ParseExprError {
    /// 1-based character column within the parsed text.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let rest = |s: &str| chars[i..].iter().take(s.len()).copied().eq(s.chars());
        if c.is_whitespace() {
            i += 1;
        } else if rest("<->") {
            out.push((Token::Iff, col));
            i += 3;
        } else if rest("->") {
            out.push((Token::Implies, col));
            i += 2;
        } else if c == '!' {
            out.push((Token::Not, col));
            i += 1;
        } else if c == '&' {
            out.push((Token::And, col));
            i += 1;
        } else if c == '|' {
            out.push((Token::Or, col));
            i += 1;
        } else if c == '(' {
            out.push((Token::LParen, col));
            i += 1;
        } else if c == ')' {
            out.push((Token::RParen, col));
            i += 1;
        } else if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ParseExprError {
                column: col,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
    resolve: &'a mut F,
}

impl<F: FnMut(&str) -> Option<Var>> Parser<'_, F> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |(_, c)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseExprError> {
        Err(ParseExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Expr, ParseExprError> {
        let mut lhs = self.implies()?;
        while self.eat(&Token::Iff) {
            let rhs = self.implies()?;
            lhs = Expr::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Expr, ParseExprError> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            let rhs = self.implies()?;
            return Ok(Expr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, ParseExprError> {
        let mut items = vec![self.and()?];
        while self.eat(&Token::Or) {
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::Or(items)
        })
    }

    fn and(&mut self) -> Result<Expr, ParseExprError> {
        let mut items = vec![self.unary()?];
        while self.eat(&Token::And) {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::And(items)
        })
    }

    fn unary(&mut self) -> Result<Expr, ParseExprError> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Expr::not(self.unary()?))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return self.error("expected ')'");
                }
                Ok(e)
            }
            Some(Token::Ident(name)) => {
                let e = match name.as_str() {
                    "true" => Expr::Const(true),
                    "false" => Expr::Const(false),
                    _ => match (self.resolve)(&name) {
                        Some(v) => Expr::Var(v),
                        None => return self.error(format!("unknown variable '{name}'")),
                    },
                };
                self.pos += 1;
                Ok(e)
            }
            Some(t) => self.error(format!("unexpected token {t:?}")),
            None => self.error("unexpected end of expression"),
        }
    }
}

/// Parses the constraint grammar. Precedence from loosest to tightest:
/// `<->` (left-assoc), `->` (right-assoc), `|`, `&`, `!`. Identifiers are
/// mapped to variables through `resolve`; `true` and `false` are constants.
pub fn parse_expr<F>(text: &str, mut resolve: F) -> Result<Expr, ParseExprError>
where
    F: FnMut(&str) -> Option<Var>,
{
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
        resolve: &mut resolve,
    };
    let e = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("trailing input");
    }
    Ok(e)
}
