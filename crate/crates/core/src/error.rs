//! Error type shared by parsers, automata constructors and deciders.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Text could not be tokenized or parsed; `pos` is a byte offset.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// An automaton or stream file is malformed; `line` is 1-based.
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// A symbol is not declared in the governing alphabet.
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    /// A symbol is used with the wrong number of children.
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    /// A state id is not declared in the automaton.
    #[error("unknown state `{0}`")]
    UnknownState(String),

    /// Two values that must share a ranked alphabet do not.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// An alphabet declaration violates an invariant.
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    /// An automaton declaration violates an invariant.
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    /// A context does not contain exactly one hole.
    #[error("invalid context: {0}")]
    InvalidContext(String),

    /// An operation requires a deterministic automaton.
    #[error("automaton is not deterministic")]
    NotDeterministic,

    /// An operation requires a complete automaton.
    #[error("automaton is not complete")]
    NotComplete,

    /// A generator was called with an out-of-range parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }
}
