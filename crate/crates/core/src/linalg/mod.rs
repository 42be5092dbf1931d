//! Dense complex linear algebra for qutrit registers (dimensions up to 3^6).

pub mod density;
pub mod eigen;
pub mod gell_mann;
pub mod matrix;

pub use density::{partial_trace_matrix, partial_transpose_matrix, validate_density, DensityMatrix};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, trace_distance, trace_norm, HermitianEigen};
pub use gell_mann::{gell_mann, gell_mann_set};
pub use matrix::{basis_vector, kron, ComplexMatrix, C64};
