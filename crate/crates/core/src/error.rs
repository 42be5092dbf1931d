use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid factor index {index} for a state with {factors} factors")]
    InvalidFactor { index: usize, factors: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e}, tolerance {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("density-matrix invariant violated: {check} (observed {observed:.3e}, tolerance {tolerance:.1e})")]
    InvariantViolation {
        check: &'static str,
        observed: f64,
        tolerance: f64,
    },

    #[error("invariant violated at t = {t}: {source}")]
    AtTime { t: f64, source: Box<Error> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("n = {n} exceeds the dense-oracle cap of {cap} qutrits")]
    TooManyQutrits { n: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
