//! Pairwise correlation measures for two-qutrit states.
//!
//! - negativity `(‖ρ^{T_A}‖₁ − 1)/2`;
//! - the Gell-Mann (Bloch) decomposition `(x, y, T)`;
//! - a lower bound on the Hilbert-Schmidt geometric discord from the
//!   spectrum of `C Cᵗ`;
//! - a numerical upper-bounding oracle for the discord itself ([`oracle`]).

pub mod nelder_mead;
pub mod oracle;

use crate::error::{Error, Result};
use crate::linalg::{gell_mann_set, hermitian_eigenvalues, kron, trace_norm, ComplexMatrix, DensityMatrix, C64};
use crate::tol::NEGATIVITY_CLAMP;

pub use oracle::{discord_hs_oracle, measured_distance, OracleOptions, OracleResult};

/// Imaginary parts of Gell-Mann traces above this are treated as an error.
const IMAG_TOL: f64 = 1e-10;

/// Negativity of a bipartite state with respect to `subsystem`.
pub fn negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    if rho.factor_dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "negativity needs a bipartite state, got factors {:?}",
            rho.factor_dims()
        )));
    }
    let pt = rho.partial_transpose(subsystem)?;
    let n = (trace_norm(&pt)? - 1.0) / 2.0;
    Ok(if (-NEGATIVITY_CLAMP..0.0).contains(&n) { 0.0 } else { n })
}

/// Coordinates of a two-qutrit state in the Gell-Mann product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GellMannDecomposition {
    pub x: [f64; 8],
    pub y: [f64; 8],
    /// `t[i][j]` multiplies `λ_{i+1} ⊗ λ_{j+1}`.
    pub t: [[f64; 8]; 8],
}

fn require_two_qutrits(rho: &DensityMatrix) -> Result<()> {
    if rho.factor_dims() != [3, 3] {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-qutrit state, got factors {:?}",
            rho.factor_dims()
        )));
    }
    Ok(())
}

fn real_part(z: C64, what: &'static str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::InvariantViolation {
            check: what,
            observed: z.im.abs(),
            tolerance: IMAG_TOL,
        });
    }
    Ok(z.re)
}

/// `tr[ρ (A ⊗ B)]` for 3x3 `A`, `B` without forming the product.
fn trace_against_product(rho: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for ia in 0..3 {
        for ib in 0..3 {
            let row = rho.row(3 * ia + ib);
            for ja in 0..3 {
                let av = a[(ja, ia)];
                if av.re == 0.0 && av.im == 0.0 {
                    continue;
                }
                for jb in 0..3 {
                    acc += row[3 * ja + jb] * av * b[(jb, ib)];
                }
            }
        }
    }
    acc
}

/// `x_i = (3/2) tr(ρ_A λ_i)`, `y_j = (3/2) tr(ρ_B λ_j)`,
/// `T_ij = (9/4) tr[ρ (λ_i ⊗ λ_j)]`.
pub fn gm_decompose(rho: &DensityMatrix) -> Result<GellMannDecomposition> {
    require_two_qutrits(rho)?;
    let lambdas = gell_mann_set();
    let rho_a = rho.partial_trace(&[0])?;
    let rho_b = rho.partial_trace(&[1])?;
    let mut x = [0.0; 8];
    let mut y = [0.0; 8];
    let mut t = [[0.0; 8]; 8];
    for (i, l) in lambdas.iter().enumerate() {
        x[i] = 1.5 * real_part(rho_a.matrix().matmul(l).trace(), "imaginary Bloch component")?;
        y[i] = 1.5 * real_part(rho_b.matrix().matmul(l).trace(), "imaginary Bloch component")?;
    }
    for (i, li) in lambdas.iter().enumerate() {
        for (j, lj) in lambdas.iter().enumerate() {
            let z = trace_against_product(rho.matrix(), li, lj);
            t[i][j] = 2.25 * real_part(z, "imaginary correlation component")?;
        }
    }
    Ok(GellMannDecomposition { x, y, t })
}

impl GellMannDecomposition {
    /// `(1/9)[I⊗I + Σ x_i λ_i⊗I + Σ y_j I⊗λ_j + Σ T_ij λ_i⊗λ_j]`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambdas = gell_mann_set();
        let id = ComplexMatrix::identity(3);
        let mut local_a = id.clone();
        let mut local_b = id.clone();
        for (i, l) in lambdas.iter().enumerate() {
            local_a.add_scaled(C64::new(self.x[i], 0.0), l);
            local_b.add_scaled(C64::new(self.y[i], 0.0), l);
        }
        // I⊗I + Σx λ⊗I + Σy I⊗λ = A⊗I + I⊗B − I⊗I, with A, B as built above.
        let mut m = kron(&local_a, &id);
        m.add_scaled(C64::new(1.0, 0.0), &kron(&id, &local_b));
        m.add_scaled(C64::new(-1.0, 0.0), &ComplexMatrix::identity(9));
        for (i, li) in lambdas.iter().enumerate() {
            for (j, lj) in lambdas.iter().enumerate() {
                if self.t[i][j] != 0.0 {
                    m.add_scaled(C64::new(self.t[i][j], 0.0), &kron(li, lj));
                }
            }
        }
        m.scale_real(1.0 / 9.0)
    }
}

/// The 9x9 matrix
/// `[[1/3, (2/(3√3)) yᵗ], [(2/(3√3)) x, (2/9) T]]`.
pub fn c_matrix(d: &GellMannDecomposition) -> [[f64; 9]; 9] {
    let edge = 2.0 / (3.0 * 3f64.sqrt());
    let mut c = [[0.0; 9]; 9];
    c[0][0] = 1.0 / 3.0;
    for i in 0..8 {
        c[0][i + 1] = edge * d.y[i];
        c[i + 1][0] = edge * d.x[i];
        for j in 0..8 {
            c[i + 1][j + 1] = 2.0 / 9.0 * d.t[i][j];
        }
    }
    c
}

/// Eigenvalues of `C Cᵗ`, descending.
pub fn cct_spectrum(c: &[[f64; 9]; 9]) -> Result<Vec<f64>> {
    let cct = ComplexMatrix::from_fn(9, |i, j| C64::new((0..9).map(|k| c[i][k] * c[j][k]).sum(), 0.0));
    let mut ev = hermitian_eigenvalues(&cct)?;
    ev.reverse();
    Ok(ev)
}

/// Sum of the six smallest eigenvalues of `C Cᵗ` (all but the three largest).
pub fn discord_lower_bound(rho: &DensityMatrix) -> Result<f64> {
    let d = gm_decompose(rho)?;
    let ev = cct_spectrum(&c_matrix(&d))?;
    Ok(ev[3..].iter().map(|&e| e.max(0.0)).sum())
}

/// One row of a correlation time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPoint {
    pub t: f64,
    pub negativity: f64,
    pub discord_lb: f64,
    pub discord_oracle: Option<f64>,
}
