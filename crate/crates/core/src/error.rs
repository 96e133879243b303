use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to rejected input;
/// numerical checks that merely fail are reported through their own report types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown basis label `{0}` (expected su2-pauli, su3-gellmann or su6-tensor)")]
    UnknownBasis(String),

    #[error("basis is not orthonormal: max |tr(t_A t_B) - 2 delta_AB| = {0:e}")]
    NotOrthonormal(f64),

    #[error("index {index} out of range for a basis of {size} elements")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("symmetrized trace needs 2..=6 indices, got {0}")]
    Arity(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace deviates from 1 by {0:e}")]
    WrongTrace(f64),

    #[error("omega is not traceless (|tr omega| = {0:e})")]
    NotTraceless(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("requested degree {requested} exceeds the resource cap {cap}; raise the cap explicitly to proceed")]
    ResourceCap { requested: usize, cap: usize },

    #[error("unknown group `{0}` (expected 2x2 or 2x3)")]
    UnknownGroup(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("state field `{field}`: {message}")]
    StateField { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
