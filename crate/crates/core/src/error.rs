use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("decision variable {index} = {value} lies outside [0, 1]")]
    OutOfBox { index: usize, value: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("fitness-proportionate selection needs positive scores, found {0}")]
    NonPositiveScore(f64),

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },
}
