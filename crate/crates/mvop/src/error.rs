//! Error type shared by all modules of the crate.

use std::fmt;

/// Errors raised by construction and verification routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands have incompatible matrix sizes.
    SizeMismatch { expected: usize, got: usize },
    /// A matrix inversion or linear solve hit a (numerically) singular matrix.
    SingularMatrix,
    /// Interpolation nodes are not pairwise distinct.
    DuplicateNodes,
    /// A parameter is outside its documented range.
    InvalidParameter(String),
    /// A linear system that the theory predicts to be consistent is not,
    /// within tolerance. Carries a diagnostic message.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SizeMismatch { expected, got } => {
                write!(f, "matrix size mismatch: expected {expected}, got {got}")
            }
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::DuplicateNodes => write!(f, "interpolation nodes must be pairwise distinct"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Inconsistent(msg) => write!(f, "inconsistent system: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
