//! Core of the `confik` configurator.
//!
//! The crate is layered bottom-up:
//!
//! * [`logic`]: variables, expressions, clause sets, a deterministic conflict-driven
//!   solver, DIMACS I/O and brute-force model oracles.
//! * [`feature_model`]: the FODA-style model text format and its
//!   translation to propositional constraints.
//! * [`reasoning`]: deselectable sets, dispensable variables, minimal-model
//!   enumeration and the brute-force oracles that cross-check them.
//! * [`session`]: the interactive configuration process with inference,
//!   retraction, blind completion and the shopping principle.
//! * [`osd`]: finite-domain configuration under a preference order.
//! * [`sim`]: random manual configuration runs and their statistics.

pub mod feature_model;
pub mod logic;
pub mod osd;
pub mod reasoning;
pub mod session;
pub mod sim;

pub use feature_model::FeatureModel;
pub use logic::{Assignment, ClauseSet, Expr, Lit, Var, VarTable};
pub use session::{Session, SessionError, VarStatus};
