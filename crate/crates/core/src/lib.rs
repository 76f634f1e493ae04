//! Residual finite tree automata over ranked alphabets.
//!
//! The crate provides ranked terms and contexts, bottom-up and top-down
//! finite tree automata with the usual decision algebra (determinization,
//! boolean operations, emptiness, inclusion, equivalence, minimization),
//! and on top of those the residual-language machinery: residual lattices
//! and catalogs, prime/composite classification, canonical residual
//! automata in both directions, and deciders for the top-down hierarchy
//! (path-closed, homogeneous, residual-recognizable).
//!
//! A brute-force [`oracle`] module re-implements the residual definitions
//! by bounded enumeration; the test suites use it as independent ground
//! truth.

pub mod error;
pub mod trees;
pub mod bu;
pub mod td;
pub mod residuals_up;
pub mod residuals_down;
pub mod oracle;
pub mod corpus;
pub mod format;

pub use error::Error;
pub use trees::{Context, RankedAlphabet, Term};
pub use bu::{BottomUpAutomaton, Dfta, Rule, State};
pub use td::{TdRule, TopDownAutomaton};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
