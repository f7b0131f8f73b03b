use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("outside the convergence domain: {0}")]
    Domain(String),
    #[error("outside the recentering radius: {0}")]
    OutOfRadius(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, PadicError>;
