//! Numerical estimate of the Hilbert-Schmidt geometric discord.
//!
//! For a complete projective measurement `{|u_k⟩⟨u_k|}` on qutrit A, the
//! post-measurement state is `Π(ρ) = Σ_k |u_k⟩⟨u_k| ⊗ σ_k` with
//! `σ_k = ⟨u_k|ρ|u_k⟩_A`. Since `Π` is an orthogonal projection in
//! Hilbert-Schmidt space, `‖ρ − Π(ρ)‖² = tr ρ² − Σ_k tr σ_k²`. The measurement
//! basis is the column set of `U = exp(i Σ_j p_j λ_j)` and the eight real
//! parameters `p` are searched by Nelder-Mead from seeded random starts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::nelder_mead::{minimize, NelderMeadOptions};
use crate::error::{Error, Result};
use crate::linalg::{gell_mann_set, hermitian_eigen, ComplexMatrix, DensityMatrix, C64};

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub restarts: usize,
    pub seed: u64,
    pub optimizer: NelderMeadOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0,
            optimizer: NelderMeadOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: f64,
    /// Whether the restart that produced `value` met the simplex tolerance.
    pub converged: bool,
    pub params: [f64; 8],
}

/// `exp(i Σ_j p_j λ_j)`.
pub fn measurement_unitary(p: &[f64]) -> Result<ComplexMatrix> {
    let mut h = ComplexMatrix::zeros(3);
    for (pj, l) in p.iter().zip(gell_mann_set()) {
        h.add_scaled(C64::new(*pj, 0.0), l);
    }
    let eig = hermitian_eigen(&h)?;
    let v = &eig.vectors;
    Ok(ComplexMatrix::from_fn(3, |i, j| {
        (0..3)
            .map(|k| v[(i, k)] * C64::from_polar(1.0, eig.values[k]) * v[(j, k)].conj())
            .sum()
    }))
}

/// `‖ρ − Π_U(ρ)‖²` for the measurement on factor 0 given by the columns of `u`.
pub fn measured_distance(rho: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let purity = rho.hs_inner(rho).re;
    let mut kept = 0.0;
    for k in 0..3 {
        let col: [C64; 3] = std::array::from_fn(|a| u[(a, k)]);
        let mut sigma = [[C64::new(0.0, 0.0); 3]; 3];
        for (a, ca) in col.iter().enumerate() {
            for (ap, cap) in col.iter().enumerate() {
                let w = ca.conj() * cap;
                for (b, srow) in sigma.iter_mut().enumerate() {
                    let row = rho.row(3 * a + b);
                    for (bp, s) in srow.iter_mut().enumerate() {
                        *s += w * row[3 * ap + bp];
                    }
                }
            }
        }
        kept += sigma.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    }
    (purity - kept).max(0.0)
}

/// Best `‖ρ − Π(ρ)‖²` over projective measurements on the first qutrit.
///
/// Restart `r` draws its start from a ChaCha stream keyed by `(seed, r)`, so
/// the result does not depend on how restarts are scheduled.
pub fn discord_hs_oracle(rho: &DensityMatrix, opts: &OracleOptions) -> Result<OracleResult> {
    if rho.factor_dims() != [3, 3] {
        return Err(Error::DimensionMismatch(format!(
            "discord oracle needs a two-qutrit state, got {:?}",
            rho.factor_dims()
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("oracle needs at least one restart".into()));
    }
    let m = rho.matrix();
    let objective = |p: &[f64]| match measurement_unitary(p) {
        Ok(u) => measured_distance(m, &u),
        Err(_) => f64::INFINITY,
    };
    let runs: Vec<(f64, bool, Vec<f64>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let x0: Vec<f64> = (0..8)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let res = minimize(objective, &x0, &opts.optimizer);
            (res.f, res.converged, res.x)
        })
        .collect();
    let (value, converged, x) = runs
        .into_iter()
        .reduce(|best, cand| if cand.0 < best.0 { cand } else { best })
        .expect("at least one restart");
    Ok(OracleResult {
        value,
        converged,
        params: std::array::from_fn(|i| x[i]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::discord_lower_bound;
    use crate::random::{random_product_state, random_two_qutrit};

    #[test]
    fn unitary_is_unitary() {
        let u = measurement_unitary(&[0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 0.9, 1.5]).unwrap();
        assert!(u.matmul(&u.adjoint()).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn computational_measurement_distance() {
        // |ψ⟩ = (|00⟩ + |11⟩)/√2 measured in the computational basis leaves
        // (|00⟩⟨00| + |11⟩⟨11|)/2: distance 1 − 1/2.
        let mut v = vec![C64::new(0.0, 0.0); 9];
        v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[4] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = ComplexMatrix::projector(&v);
        let d = measured_distance(&rho, &ComplexMatrix::identity(3));
        assert!((d - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_for_maximally_mixed_and_products() {
        let opts = OracleOptions::default();
        let r = discord_hs_oracle(&DensityMatrix::maximally_mixed(vec![3, 3]), &opts).unwrap();
        assert!(r.value <= 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..5 {
            let rho = random_product_state(&mut rng);
            let r = discord_hs_oracle(&rho, &opts).unwrap();
            assert!(r.value <= 1e-8, "{}", r.value);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let rho = random_two_qutrit(&mut rng);
        let opts = OracleOptions {
            seed: 17,
            ..Default::default()
        };
        let a = discord_hs_oracle(&rho, &opts).unwrap();
        let b = discord_hs_oracle(&rho, &opts).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.params, b.params);
    }

    #[test]
    fn bounds_the_c_matrix_estimate_from_above() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..5 {
            let rho = random_two_qutrit(&mut rng);
            let lb = discord_lower_bound(&rho).unwrap();
            let orc = discord_hs_oracle(&rho, &OracleOptions::default()).unwrap();
            assert!(lb <= orc.value + 1e-6, "lb {lb} > oracle {}", orc.value);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let opts = OracleOptions {
            restarts: 0,
            ..Default::default()
        };
        assert!(discord_hs_oracle(&DensityMatrix::maximally_mixed(vec![3, 3]), &opts).is_err());
        assert!(discord_hs_oracle(&DensityMatrix::maximally_mixed(vec![9]), &OracleOptions::default()).is_err());
    }
}
