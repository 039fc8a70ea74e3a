use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite input: {0}")]
    NonFiniteInput(String),

    #[error("invalid function: {0}")]
    Validation(String),

    #[error("operation requires a {expected} function")]
    WrongCombinator { expected: &'static str },

    #[error("conversion would create {count} sets, cap is {cap}")]
    BlowupCapExceeded { count: u128, cap: usize },

    #[error("simplex exceeded {0} pivots")]
    MaxPivotsExceeded(usize),

    #[error("function is not normalized at the origin: value {0}")]
    NormalizationViolated(f64),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("dimension {dim} exceeds the cap {cap} for this check")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("penalty descent stopped after {iterations} iterations at value {value:e}")]
    PenaltyNotConverged {
        best: Vec<f64>,
        value: f64,
        iterations: usize,
    },

    #[error("grid of {points} points is too large (n = {dim})")]
    GridTooLarge { points: u128, dim: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
