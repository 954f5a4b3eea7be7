use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit count {n} outside the supported range 1..={max}")]
    QubitCount { n: usize, max: usize },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("empty local operator list")]
    EmptyOperatorList,

    #[error("{what} requires an {expected} qubit count, got n = {n}")]
    Parity {
        what: &'static str,
        expected: &'static str,
        n: usize,
    },

    #[error("input is not {property}: residual {residual:e} exceeds {tol:e}")]
    Precondition {
        property: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("sampling failed after {attempts} attempts")]
    Sampling { attempts: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("maximal-entanglement conditions disagree: {0}")]
    ConditionDisagreement(String),

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
