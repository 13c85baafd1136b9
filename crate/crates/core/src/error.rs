use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable x{index} out of range (nvars = {nvars})")]
    VarOutOfRange { index: usize, nvars: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("{0} is not prime (or exceeds the 64-bit primality range)")]
    NotPrime(u64),

    #[error("enumeration budget exceeded: {points} points > budget {budget}")]
    BudgetExceeded { points: u128, budget: u64 },

    #[error("polynomials share a common factor of positive degree")]
    CommonFactor,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible supports: {0}")]
    IncompatibleSupports(String),
}

/// Coarse classification, used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Precondition,
    Budget,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. }
            | Error::VarOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidInput(_) => ErrorKind::Input,
            Error::BudgetExceeded { .. } => ErrorKind::Budget,
            Error::ZeroPolynomial
            | Error::NotPrime(_)
            | Error::CommonFactor
            | Error::Degenerate(_)
            | Error::IncompatibleSupports(_) => ErrorKind::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
