use super::eigen::hermitian_eigenvalues;
use super::matrix::{kron, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol::{HERMITIAN_TOL, POSITIVITY_SLACK, TRACE_TOL};

/// A validated density matrix over an ordered list of tensor factors.
///
/// Construction checks Hermiticity, unit trace and positivity; every value
/// of this type has passed those checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    factor_dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, factor_dims: Vec<usize>) -> Result<Self> {
        check_dims(matrix.dim(), &factor_dims)?;
        validate_density(&matrix)?;
        Ok(Self { matrix, factor_dims })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(ket: &[C64], factor_dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::projector(ket), factor_dims)
    }

    /// Computational basis projector `|index⟩⟨index|`.
    pub fn basis(index: usize, factor_dims: Vec<usize>) -> Result<Self> {
        let dim: usize = factor_dims.iter().product();
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut m = ComplexMatrix::zeros(dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self::new(m, factor_dims)
    }

    pub fn maximally_mixed(factor_dims: Vec<usize>) -> Self {
        let dim: usize = factor_dims.iter().product();
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            factor_dims,
        }
    }

    /// `ρ_1 ⊗ ρ_2 ⊗ …`, factors concatenated in order.
    pub fn product(parts: &[DensityMatrix]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("empty product".into()))?;
        let mut matrix = first.matrix.clone();
        let mut dims = first.factor_dims.clone();
        for p in rest {
            matrix = kron(&matrix, &p.matrix);
            dims.extend_from_slice(&p.factor_dims);
        }
        Ok(Self {
            matrix,
            factor_dims: dims,
        })
    }

    /// Skips validation; callers must guarantee the invariants.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, factor_dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.dim(), factor_dims.iter().product::<usize>());
        Self { matrix, factor_dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reduced state on `keep`, kept factors in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (m, dims) = partial_trace_matrix(&self.matrix, &self.factor_dims, keep)?;
        Ok(Self::from_parts_unchecked(m, dims))
    }

    /// `ρ^{T_s}`: transpose on factor `subsystem` only.
    pub fn partial_transpose(&self, subsystem: usize) -> Result<ComplexMatrix> {
        partial_transpose_matrix(&self.matrix, &self.factor_dims, subsystem)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigenvalues(&self.matrix)?[0])
    }

    pub fn purity(&self) -> f64 {
        self.matrix.hs_inner(&self.matrix).re
    }

    /// Swaps the two factors of a bipartite state.
    pub fn swap_factors(&self) -> Result<DensityMatrix> {
        let [da, db] = self.factor_dims[..] else {
            return Err(Error::DimensionMismatch(format!(
                "swap needs two factors, got {}",
                self.factor_dims.len()
            )));
        };
        let m = ComplexMatrix::from_fn(da * db, |i, j| {
            let (ia, ib) = (i / db, i % db);
            let (ja, jb) = (j / db, j % db);
            self.matrix[(ib * da + ia, jb * da + ja)]
        });
        Ok(Self::from_parts_unchecked(m, vec![db, da]))
    }
}

fn check_dims(dim: usize, factor_dims: &[usize]) -> Result<()> {
    if factor_dims.is_empty() || factor_dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid factor dims {factor_dims:?}")));
    }
    let prod: usize = factor_dims.iter().product();
    if prod != dim {
        return Err(Error::DimensionMismatch(format!(
            "factor dims {factor_dims:?} multiply to {prod}, matrix dim is {dim}"
        )));
    }
    Ok(())
}

/// Checks Hermiticity, unit trace and positivity of a raw matrix.
pub fn validate_density(m: &ComplexMatrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::InvariantViolation {
            check: "finite entries",
            observed: f64::NAN,
            tolerance: 0.0,
        });
    }
    let herm = m.hermiticity_deviation();
    if herm > HERMITIAN_TOL {
        return Err(Error::InvariantViolation {
            check: "hermiticity",
            observed: herm,
            tolerance: HERMITIAN_TOL,
        });
    }
    let tr_err = (m.trace() - 1.0).norm();
    if tr_err > TRACE_TOL {
        return Err(Error::InvariantViolation {
            check: "unit trace",
            observed: tr_err,
            tolerance: TRACE_TOL,
        });
    }
    let min_ev = hermitian_eigenvalues(m)?[0];
    if min_ev < -POSITIVITY_SLACK {
        return Err(Error::InvariantViolation {
            check: "positivity",
            observed: min_ev,
            tolerance: POSITIVITY_SLACK,
        });
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Partial trace of an arbitrary square matrix over the factors not in `keep`.
/// Returns the reduced matrix and its factor dims.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    factor_dims: &[usize],
    keep: &[usize],
) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_dims(m.dim(), factor_dims)?;
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "partial trace must keep at least one factor".into(),
        ));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= factor_dims.len()) {
        return Err(Error::InvalidFactor {
            index: bad,
            factors: factor_dims.len(),
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..factor_dims.len()).filter(|k| !kept.contains(k)).collect();

    let st = strides(factor_dims);
    let kept_dims: Vec<usize> = kept.iter().map(|&k| factor_dims[k]).collect();
    let kept_st = strides(&kept_dims);
    let traced_dims: Vec<usize> = traced.iter().map(|&k| factor_dims[k]).collect();
    let traced_st = strides(&traced_dims);
    let d_keep: usize = kept_dims.iter().product();
    let d_trace: usize = traced_dims.iter().product();

    // Group full indices by their traced multi-index.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(d_keep); d_trace];
    for full in 0..m.dim() {
        let digit = |k: usize| (full / st[k]) % factor_dims[k];
        let ki: usize = kept.iter().zip(&kept_st).map(|(&k, &s)| digit(k) * s).sum();
        let ti: usize = traced.iter().zip(&traced_st).map(|(&k, &s)| digit(k) * s).sum();
        groups[ti].push((full, ki));
    }

    let mut out = ComplexMatrix::zeros(d_keep);
    for g in &groups {
        for &(i, ki) in g {
            for &(j, kj) in g {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok((out, kept_dims))
}

/// Transpose on one tensor factor of an arbitrary square matrix.
pub fn partial_transpose_matrix(m: &ComplexMatrix, factor_dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    check_dims(m.dim(), factor_dims)?;
    if subsystem >= factor_dims.len() {
        return Err(Error::InvalidFactor {
            index: subsystem,
            factors: factor_dims.len(),
        });
    }
    let stride = strides(factor_dims)[subsystem];
    let d = factor_dims[subsystem];
    Ok(ComplexMatrix::from_fn(m.dim(), |i, j| {
        let di = (i / stride) % d;
        let dj = (j / stride) % d;
        let i2 = i - di * stride + dj * stride;
        let j2 = j - dj * stride + di * stride;
        m[(i2, j2)]
    }))
}
