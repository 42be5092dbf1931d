//! Numerical tolerances shared across the crate.

/// Max `|ρ_ij − conj(ρ_ji)|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Max `|tr ρ − 1|` for a density matrix.
pub const TRACE_TOL: f64 = 1e-9;

/// Smallest eigenvalue accepted for a density matrix is `-POSITIVITY_SLACK`.
pub const POSITIVITY_SLACK: f64 = 1e-9;

/// Jacobi sweeps stop once the off-diagonal norm falls below this
/// (relative to `max(1, ‖A‖_F)`).
pub const EIGEN_TOL: f64 = 1e-12;

/// Negativities in `[-NEGATIVITY_CLAMP, 0)` are reported as zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;
