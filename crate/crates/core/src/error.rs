//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Instance or operation requires at least 3 cities.
    #[error("instance too small: n = {0}, need n >= 3")]
    InvalidSize(usize),

    /// A city sequence is not a permutation of 0..n-1.
    #[error("invalid tour: {0}")]
    InvalidTour(String),

    /// Text input could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Dimensions of two arguments disagree.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// V^k is not a Hamiltonian cycle because gcd(k, n) > 1.
    #[error("shift k = {k} with n = {n} has gcd {gcd} > 1: V^k is not a Hamiltonian cycle")]
    NonHamiltonianShift { n: usize, k: usize, gcd: usize },

    /// A numeric input contained NaN or infinity.
    #[error("non-finite numeric input: {0}")]
    NonFinite(String),

    /// Exact methods refuse instances above their size cap.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Every restart of an optimization run failed.
    #[error("solve failed: {0}")]
    SolveFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
