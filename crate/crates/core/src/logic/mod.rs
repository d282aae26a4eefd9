//! Propositional foundation: variables, expressions, clause sets and
//! satisfiability.

mod cnf;
pub mod dimacs;
mod expr;
pub mod oracle;
mod solver;
mod var;

pub use cnf::{to_cnf, ClauseSet};
pub use expr::{parse_expr, Expr, ExprDisplay, ParseExprError};
pub use oracle::{all_models, MAX_ORACLE_VARS};
pub use solver::{backbone, count_models, entails, solve, SatResult, Solver};
pub use var::{Assignment, Lit, Var, VarTable};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    /// The context formula itself has no model, so entailment questions
    /// about it are meaningless.
    #[error("the constraint is unsatisfiable")]
    UnsatContext,
    #[error("{vars} variables exceed the brute-force limit of {limit}")]
    TooLarge { vars: usize, limit: usize },
}
