use thiserror::Error;

/// Errors produced by the estimation, recovery and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("a permutation cannot move exactly one index (k = 1 requested for n = {n})")]
    InfeasibleSparsity { n: usize },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("design matrix is rank deficient (column {column} is numerically dependent)")]
    SingularDesign { column: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("enumeration needs {candidates} candidates, budget is {budget}")]
    Budget { candidates: u128, budget: u128 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("precondition violated: {0}")]
    Infeasible(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid simulation spec: {0}")]
    Spec(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
