use thiserror::Error;

/// Errors shared by every subsystem of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular operator: min singular value {min_sv:.3e} below threshold {threshold:.3e}")]
    Singular { min_sv: f64, threshold: f64 },

    #[error("pole: {0}")]
    Pole(String),

    #[error("tolerance breach: {0}")]
    Tolerance(String),

    #[error("integer overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
