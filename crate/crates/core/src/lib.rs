//! Collective dissipation of qutrits into a common zero-temperature bath.
//!
//! The crate offers two routes to the same dynamics: a brute-force RK4
//! integration of the Lindblad equation on the full `3^n`-dimensional
//! register ([`lindblad`]) and the closed-form solution inside the
//! four-dimensional operator subspace that the collective dissipator leaves
//! invariant ([`dfs`]). Pairwise correlations of the resulting states are
//! measured by [`correlations`].

pub mod correlations;
pub mod dfs;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod random;
pub mod rk4;
pub mod tol;

pub use error::{Error, Result};
pub use model::ModelParams;
