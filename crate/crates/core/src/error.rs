use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("prescription violates {0}")]
    Prescription(String),
    #[error("operation not defined for family {0}")]
    Family(String),
    #[error("non-generic data: {0}")]
    NonGeneric(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T, E = MathError> = std::result::Result<T, E>;
