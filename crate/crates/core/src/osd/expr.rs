//! Integer and boolean expressions over finite-domain variables.

use std::fmt;

use thiserror::Error;

pub type Value = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    fn apply(self, a: Value, b: Value) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

/// Integer-valued term. Variables are indices into the tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Const(Value),
    Var(usize),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn eval(&self, tuple: &[Value]) -> Value {
        match self {
            Term::Const(c) => *c,
            Term::Var(i) => tuple[*i],
            Term::Neg(t) => t.eval(tuple).wrapping_neg(),
            Term::Add(a, b) => a.eval(tuple).wrapping_add(b.eval(tuple)),
            Term::Sub(a, b) => a.eval(tuple).wrapping_sub(b.eval(tuple)),
            Term::Mul(a, b) => a.eval(tuple).wrapping_mul(b.eval(tuple)),
        }
    }

    fn is_const(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Neg(t) => t.is_const(),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => a.is_const() && b.is_const(),
        }
    }
}

/// Boolean condition over a tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cond {
    Const(bool),
    /// A bare term stands for `term != 0`.
    Truthy(Term),
    Cmp(Term, CmpOp, Term),
    Not(Box<Cond>),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Implies(Box<Cond>, Box<Cond>),
    Iff(Box<Cond>, Box<Cond>),
}

impl Cond {
    pub fn eval(&self, tuple: &[Value]) -> bool {
        match self {
            Cond::Const(b) => *b,
            Cond::Truthy(t) => t.eval(tuple) != 0,
            Cond::Cmp(a, op, b) => op.apply(a.eval(tuple), b.eval(tuple)),
            Cond::Not(c) => !c.eval(tuple),
            Cond::And(a, b) => a.eval(tuple) && b.eval(tuple),
            Cond::Or(a, b) => a.eval(tuple) || b.eval(tuple),
            Cond::Implies(a, b) => !a.eval(tuple) || b.eval(tuple),
            Cond::Iff(a, b) => a.eval(tuple) == b.eval(tuple),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Value),
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Sym(s) => f.write_str(s),
        }
    }
}

const SYMBOLS: [&str; 17] = [
    "<->", "->", "<=", ">=", "!=", "==", "<", ">", "=", "!", "&", "|", "+", "-", "*", "(", ")",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let column = text[..i].chars().count() + 1;
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| ExprError {
                column,
                message: "number out of range".into(),
            })?;
            out.push((column, Tok::Num(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'.') {
                i += 1;
            }
            out.push((column, Tok::Ident(text[start..i].to_owned())));
            continue;
        }
        for sym in SYMBOLS {
            if text[i..].starts_with(sym) {
                out.push((column, Tok::Sym(if sym == "==" { "=" } else { sym })));
                i += sym.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(ExprError {
            column,
            message: format!("unexpected character '{ch}'"),
        });
    }
    Ok(out)
}

/// Untyped syntax tree; typed after parsing.
enum Node {
    Num(Value),
    Bool(bool),
    Var(usize),
    Unary(&'static str, Box<Node>),
    Binary(&'static str, Box<Node>, Box<Node>),
}

struct Parser<'a, F> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    resolve: &'a F,
}

impl<F: Fn(&str) -> Option<usize>> Parser<'_, F> {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn peek_sym(&self) -> Option<&'static str> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Sym(s))) => Some(s),
            _ => None,
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if self.peek_sym() == Some(sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Node, ExprError> {
        let mut left = self.implies()?;
        while self.eat("<->") {
            let right = self.implies()?;
            left = Node::Binary("<->", Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Node, ExprError> {
        let left = self.or()?;
        if self.eat("->") {
            let right = self.implies()?;
            return Ok(Node::Binary("->", Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Node, ExprError> {
        let mut left = self.and()?;
        while self.eat("|") {
            let right = self.and()?;
            left = Node::Binary("|", Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Node, ExprError> {
        let mut left = self.not()?;
        while self.eat("&") {
            let right = self.not()?;
            left = Node::Binary("&", Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn not(&mut self) -> Result<Node, ExprError> {
        if self.eat("!") {
            return Ok(Node::Unary("!", Box::new(self.not()?)));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Node, ExprError> {
        let left = self.sum()?;
        for op in ["<=", ">=", "!=", "<", ">", "="] {
            if self.eat(op) {
                let right = self.sum()?;
                return Ok(Node::Binary(op, Box::new(left), Box::new(right)));
            }
        }
        Ok(left)
    }

    fn sum(&mut self) -> Result<Node, ExprError> {
        let mut left = self.product()?;
        loop {
            let op = if self.eat("+") {
                "+"
            } else if self.eat("-") {
                "-"
            } else {
                return Ok(left);
            };
            let right = self.product()?;
            left = Node::Binary(op, Box::new(left), Box::new(right));
        }
    }

    fn product(&mut self) -> Result<Node, ExprError> {
        let mut left = self.unary()?;
        while self.eat("*") {
            let right = self.unary()?;
            left = Node::Binary("*", Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat("-") {
            return Ok(Node::Unary("-", Box::new(self.unary()?)));
        }
        let column = self.column();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(Node::Num(n))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                match name.as_str() {
                    "true" => Ok(Node::Bool(true)),
                    "false" => Ok(Node::Bool(false)),
                    _ => match (self.resolve)(&name) {
                        Some(i) => Ok(Node::Var(i)),
                        None => Err(ExprError {
                            column,
                            message: format!("unknown variable '{name}'"),
                        }),
                    },
                }
            }
            Some((_, Tok::Sym("("))) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(")") {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some((_, tok)) => self.err(format!("unexpected '{tok}'")),
            None => self.err("unexpected end of expression"),
        }
    }
}

fn term(node: Node) -> Result<Term, String> {
    Ok(match node {
        Node::Num(n) => Term::Const(n),
        Node::Var(i) => Term::Var(i),
        Node::Unary("-", t) => Term::Neg(Box::new(term(*t)?)),
        Node::Binary(op @ ("+" | "-" | "*"), a, b) => {
            let (a, b) = (Box::new(term(*a)?), Box::new(term(*b)?));
            match op {
                "+" => Term::Add(a, b),
                "-" => Term::Sub(a, b),
                _ => {
                    if !a.is_const() && !b.is_const() {
                        return Err("multiplication needs a constant factor".into());
                    }
                    Term::Mul(a, b)
                }
            }
        }
        _ => return Err("expected a number, found a condition".into()),
    })
}

fn cond(node: Node) -> Result<Cond, String> {
    let op = match &node {
        Node::Bool(b) => return Ok(Cond::Const(*b)),
        Node::Unary("!", _) => "!",
        Node::Binary(op, _, _) => op,
        _ => return Ok(Cond::Truthy(term(node)?)),
    };
    Ok(match (op, node) {
        ("!", Node::Unary(_, c)) => Cond::Not(Box::new(cond(*c)?)),
        (op @ ("<" | "<=" | ">" | ">=" | "=" | "!="), Node::Binary(_, a, b)) => {
            let op = match op {
                "<" => CmpOp::Lt,
                "<=" => CmpOp::Le,
                ">" => CmpOp::Gt,
                ">=" => CmpOp::Ge,
                "=" => CmpOp::Eq,
                _ => CmpOp::Ne,
            };
            Cond::Cmp(term(*a)?, op, term(*b)?)
        }
        (op @ ("&" | "|" | "->" | "<->"), Node::Binary(_, a, b)) => {
            let (a, b) = (Box::new(cond(*a)?), Box::new(cond(*b)?));
            match op {
                "&" => Cond::And(a, b),
                "|" => Cond::Or(a, b),
                "->" => Cond::Implies(a, b),
                _ => Cond::Iff(a, b),
            }
        }
        (_, node) => Cond::Truthy(term(node)?),
    })
}

fn parse_node<F>(text: &str, resolve: &F) -> Result<Node, ExprError>
where
    F: Fn(&str) -> Option<usize>,
{
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.chars().count() + 1,
        resolve,
    };
    let node = p.iff()?;
    if p.pos < p.toks.len() {
        return p.err(format!("unexpected '{}'", p.toks[p.pos].1));
    }
    Ok(node)
}

/// Parses a condition. A bare numeric term is read as `term != 0`.
pub fn parse_cond<F>(text: &str, resolve: F) -> Result<Cond, ExprError>
where
    F: Fn(&str) -> Option<usize>,
{
    let node = parse_node(text, &resolve)?;
    cond(node).map_err(|message| ExprError { column: 1, message })
}

/// Parses an integer term: constants, variables, `+`, `-` and `*` with at
/// least one constant factor.
pub fn parse_term<F>(text: &str, resolve: F) -> Result<Term, ExprError>
where
    F: Fn(&str) -> Option<usize>,
{
    let node = parse_node(text, &resolve)?;
    term(node).map_err(|message| ExprError { column: 1, message })
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
