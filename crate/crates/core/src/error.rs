//! Library-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected even dimension, got {0}")]
    OddDimension(usize),
    #[error("expected odd dimension, got {0}")]
    EvenDimension(usize),
    #[error("bad degree: {0}")]
    BadDegree(String),
    #[error("dimension {0} exceeds the configured cap {1}")]
    DimensionTooLarge(usize, usize),
    #[error("unsubstituted parameters: {0}")]
    UnsubstitutedParameters(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("form is degenerate")]
    Degenerate,
    #[error("form is not effective: theta ^ omega != 0")]
    NotEffective,
    #[error("form is not normalized: <theta, theta> != 1")]
    NotNormalized,
    #[error("1-form is not contact")]
    NotContact,
    #[error("zero form not allowed here")]
    ZeroForm,
    #[error("Leibniz rule fails on basis pair (e{i}, e{j})")]
    NotADerivation { i: usize, j: usize },
    #[error("wrong rank: expected {expected}, got {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("nilpotency class {0} exceeds the cap {1}")]
    ClassTooLarge(usize, usize),
    #[error("frame matrix is not unipotent")]
    NotUnipotent,
    #[error("chart inverse check failed on {0}")]
    BadChartInverse(String),
    #[error(transparent)]
    Parse(#[from] crate::parse::ParseError),
    #[error("invalid parameter assignment: {0}")]
    UnsupportedAssignment(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
