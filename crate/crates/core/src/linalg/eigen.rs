//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies a
//! real Jacobi rotation to the resulting real symmetric 2x2 block. Sweeps run
//! over all `p < q` pairs until the off-diagonal Frobenius norm drops below
//! `EIGEN_TOL * max(1, ‖A‖_F)`.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol::{EIGEN_TOL, HERMITIAN_TOL};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching eigenvectors stored as
/// the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// The `k`-th eigenvector (column `k`).
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITIAN_TOL,
        });
    }
    Ok(())
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = if want_vectors {
        ComplexMatrix::identity(n)
    } else {
        ComplexMatrix::zeros(0)
    };
    let threshold = EIGEN_TOL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let phase = apq / g;
                // Rotation U in the (p, q) plane.
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * u_qp;
                    a[(k, q)] = akp * s + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * u_qp.conj();
                    a[(q, k)] = apk * s + aqk * u_qq.conj();
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(app - t * g, 0.0);
                a[(q, q)] = C64::new(aqq + t * g, 0.0);

                if want_vectors {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * u_qp;
                        v[(k, q)] = vkp * s + vkq * u_qq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = if want_vectors {
        ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])])
    } else {
        v
    };
    Ok(HermitianEigen { values, vectors })
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(m, false)?.values)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    jacobi(m, true)
}

/// `Σ |η_i|` over the eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

/// `½ ‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between dims {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(0.5 * trace_norm(&(a - b))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gell_mann::gell_mann;

    #[test]
    fn identity_spectrum() {
        let ev = hermitian_eigenvalues(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(ev, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn lambda3_and_lambda1_spectra() {
        for i in [1, 3] {
            let ev = hermitian_eigenvalues(&gell_mann(i).unwrap()).unwrap();
            for (got, want) in ev.iter().zip([-1.0, 0.0, 1.0]) {
                assert!((got - want).abs() < 1e-12, "λ{i}: {ev:?}");
            }
        }
    }

    /// Roots of the characteristic polynomial `det(xI − λ) = x³ − p x − q`
    /// of a traceless 3×3 Hermitian matrix, by the trigonometric method.
    fn traceless_cubic_roots(m: &ComplexMatrix) -> Vec<f64> {
        let m2 = m.matmul(m);
        let m3 = m2.matmul(m);
        let p = 0.5 * m2.trace().re;
        let q = m3.trace().re / 3.0;
        if p.abs() < 1e-15 {
            return vec![0.0; 3];
        }
        let r = (4.0 * p / 3.0).sqrt();
        let arg = (4.0 * q / (r * r * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut roots: Vec<f64> = (0..3)
            .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect();
        roots.sort_by(f64::total_cmp);
        roots
    }

    #[test]
    fn gell_mann_spectra_match_characteristic_polynomial() {
        for i in 1..=8 {
            let l = gell_mann(i).unwrap();
            let ev = hermitian_eigenvalues(&l).unwrap();
            let roots = traceless_cubic_roots(&l);
            for (a, b) in ev.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-12, "λ{i}: {ev:?} vs {roots:?}");
            }
        }
    }

    #[test]
    fn eigenvectors_reconstruct_matrix() {
        let m = ComplexMatrix::from_fn(5, |i, j| {
            if i == j {
                C64::new(i as f64 - 2.0, 0.0)
            } else if i < j {
                C64::new(0.3 * (i + j) as f64, 0.1 * (j as f64 - i as f64))
            } else {
                C64::new(0.3 * (i + j) as f64, -0.1 * (i as f64 - j as f64))
            }
        });
        let eig = hermitian_eigen(&m).unwrap();
        let d = ComplexMatrix::from_fn(5, |i, j| {
            if i == j {
                C64::new(eig.values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let rebuilt = eig.vectors.matmul(&d).matmul(&eig.vectors.adjoint());
        assert!(rebuilt.max_abs_diff(&m) < 1e-12);
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-9);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn trace_norm_of_lambda3() {
        assert!((trace_norm(&gell_mann(3).unwrap()).unwrap() - 2.0).abs() < 1e-12);
    }
}
