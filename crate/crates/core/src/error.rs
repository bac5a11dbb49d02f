use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow while converting an exact value")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial division left a remainder")]
    NotDivisible,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("result has non-integral coefficients")]
    NonIntegral,
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("orbit exceeds cap of {0} nodes")]
    OrbitCap(usize),
    #[error("direction enumeration exceeds budget of {0}")]
    Budget(usize),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("holonomy system has no solution: {0}")]
    Unsolvable(String),
    #[error("word does not trace a closed path from node {0}")]
    OpenPath(usize),
    #[error("bad word: {0}")]
    BadWord(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("result inside the undecided band: {0}")]
    DeadBand(String),
}

pub type Result<T> = std::result::Result<T, Error>;
