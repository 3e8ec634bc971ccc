use thiserror::Error;

/// Errors raised by the Gaussian toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}; expected a square matrix of even dimension")]
    Structure { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("mode index {mode} out of range for {n_modes} modes")]
    InvalidMode { mode: usize, n_modes: usize },

    #[error("transmittance {0} outside [0, 1]")]
    Transmittance(f64),

    #[error("noise variance must be non-negative, got {0}")]
    NegativeNoise(f64),

    #[error("matrix is not symplectic (max |S Ω Sᵀ - Ω| = {0:e})")]
    NotSymplectic(f64),

    #[error("non-finite entry in input matrix")]
    NonFinite,

    #[error("unphysical input: {0}")]
    Unphysical(String),

    #[error("invalid bipartite split: {0}")]
    InvalidSplit(String),

    #[error("filter out of domain at t = {t}: {reason}")]
    FilterOutOfDomain { t: f64, reason: String },

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("empty filtration domain: {0}")]
    EmptyDomain(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
