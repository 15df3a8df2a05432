//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file (network matrix, edge list, or actor CSV).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input violates a structural requirement (asymmetry, self-loops,
    /// length mismatches, degenerate designs, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// A model configuration that cannot be realized, e.g. a simulation
    /// condition whose implied outcome residual variance is nonpositive.
    #[error("infeasible condition: {0}")]
    Infeasible(String),

    /// Numerical failure inside an algorithm (NaN/overflow in a chain,
    /// singular linear system).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
