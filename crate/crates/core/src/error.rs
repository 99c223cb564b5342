use thiserror::Error;

/// Errors raised by the problem suite, the direction finders and the line searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value evaluating {problem} at x = {x:?}")]
    NonFiniteValue { problem: String, x: Vec<f64> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("line search exceeded {limit} backtracking steps")]
    BacktrackLimitExceeded { limit: usize },

    #[error("no feasible step: the box blocks the search direction")]
    NoFeasibleStep,

    #[error("gradient of objective {index} vanishes; plain normalization is undefined")]
    ZeroGradient { index: usize },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
