//! Dynamics inside the decoherence-free operator subspace.
//!
//! Starting from `|k⟩⟨k|` (qutrit `k` in `|1⟩`, the rest in `|0⟩`), the
//! collective dissipator keeps the state in the span of
//!
//! - `|G⟩⟨G|` (all qutrits in `|0⟩`),
//! - `|k⟩⟨k|`,
//! - `|E⟩⟨E|` with `|E⟩ = A2 Σ_{i≠k} |1_i⟩ + √(A2A3) Σ_μ |2_μ⟩`,
//! - `X = |E⟩⟨k| + |k⟩⟨E|`,
//!
//! so `ρ(t) = a0 |G⟩⟨G| + a1 |k⟩⟨k| + a2 |E⟩⟨E| + a3 X`. The `μ` sum runs over
//! every qutrit including `k`, which makes `⟨E|E⟩ = A2·β`.
//!
//! With `β = (n−1)A2 + nA3` and `γ = n(A2 + A3) = β + A2`, the coefficients
//! obey a linear system with rates `0`, `γ` and `2γ`; [`coefficients_closed_form`]
//! is its exact solution and [`coefficients_ode`] integrates it directly.

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, ComplexMatrix, DensityMatrix, C64};
use crate::lindblad::{single_excitation, Dissipator};
use crate::model::ModelParams;
use crate::rk4::rk4_step;
use crate::tol::{POSITIVITY_SLACK, TRACE_TOL};

/// Expansion coefficients at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfsCoefficients {
    pub t: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl DfsCoefficients {
    pub fn initial() -> Self {
        Self {
            t: 0.0,
            a0: 0.0,
            a1: 1.0,
            a2: 0.0,
            a3: 0.0,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    fn from_array(t: f64, a: [f64; 4]) -> Self {
        Self {
            t,
            a0: a[0],
            a1: a[1],
            a2: a[2],
            a3: a[3],
        }
    }

    /// `a0 + a1 + A2·β·a2`, the trace of the reconstructed state.
    pub fn trace(&self, params: &ModelParams) -> f64 {
        self.a0 + self.a1 + params.a2() * params.beta() * self.a2
    }

    /// Checks the trace identity, population bounds and positivity of the
    /// state these coefficients describe.
    pub fn check(&self, params: &ModelParams) -> Result<()> {
        let tr_err = (self.trace(params) - 1.0).abs();
        if tr_err > TRACE_TOL {
            return Err(Error::InvariantViolation {
                check: "coefficient trace identity",
                observed: tr_err,
                tolerance: TRACE_TOL,
            });
        }
        for (name, v) in [("a0 range", self.a0), ("a1 range", self.a1)] {
            if !(-TRACE_TOL..=1.0 + TRACE_TOL).contains(&v) {
                return Err(Error::InvariantViolation {
                    check: name,
                    observed: v,
                    tolerance: TRACE_TOL,
                });
            }
        }
        if self.a2 < -1e-12 {
            return Err(Error::InvariantViolation {
                check: "a2 non-negative",
                observed: self.a2,
                tolerance: 1e-12,
            });
        }
        // The state is a0 |G⟩⟨G| plus a 2x2 block on {|k⟩, |E⟩/‖E‖}.
        let e_norm_sq = params.a2() * params.beta();
        let (p, q, off) = (self.a1, self.a2 * e_norm_sq, self.a3 * e_norm_sq.sqrt());
        let min_block = 0.5 * (p + q) - (0.25 * (p - q) * (p - q) + off * off).sqrt();
        let min_ev = self.a0.min(min_block);
        if min_ev < -POSITIVITY_SLACK {
            return Err(Error::InvariantViolation {
                check: "positivity",
                observed: min_ev,
                tolerance: POSITIVITY_SLACK,
            });
        }
        Ok(())
    }
}

/// Closed-form coefficients at time `t` for the initial state `|k⟩⟨k|`.
///
/// With `u = e^{−γt}`:
/// `a0 = (A2/γ)(1 − u²)`, `a1 = (β + A2 u)²/γ²`, `a2 = (1 − u)²/γ²`,
/// `a3 = −(1 − u)(β + A2 u)/γ²`.
///
/// When `A2 = 0` the operators `|E⟩⟨E|` and `X` vanish identically, so `a2`
/// and `a3` carry no information; they are pinned to zero.
pub fn coefficients_closed_form(params: &ModelParams, t: f64) -> Result<DfsCoefficients> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    let a2 = params.a2();
    if a2 == 0.0 {
        return Ok(DfsCoefficients {
            t,
            ..DfsCoefficients::initial()
        });
    }
    let beta = params.beta();
    let gamma = params.gamma();
    let u = (-gamma * t).exp();
    let s = (beta + a2 * u) / gamma;
    let v = (1.0 - u) / gamma;
    Ok(DfsCoefficients {
        t,
        a0: a2 / gamma * (1.0 - u) * (1.0 + u),
        a1: s * s,
        a2: v * v,
        a3: -v * s,
    })
}

/// Generator of the coefficient dynamics, `ȧ = M a`.
pub fn generator_matrix(params: &ModelParams) -> [[f64; 4]; 4] {
    let (a2, beta, gamma) = (params.a2(), params.beta(), params.gamma());
    [
        [0.0, 2.0 * a2, 2.0 * a2 * beta * beta, 4.0 * a2 * beta],
        [0.0, -2.0 * a2, 0.0, -2.0 * a2 * beta],
        [0.0, 0.0, -2.0 * beta, -2.0],
        [0.0, -1.0, -a2 * beta, -gamma],
    ]
}

/// `ȧ` at the given coefficients.
pub fn coefficient_rates(params: &ModelParams, a: &[f64; 4]) -> [f64; 4] {
    let m = generator_matrix(params);
    std::array::from_fn(|i| (0..4).map(|j| m[i][j] * a[j]).sum())
}

/// RK4 integration of the coefficient system from `(0, 1, 0, 0)` up to `t`.
/// The last step is shortened so the integration lands exactly on `t`.
pub fn coefficients_ode(params: &ModelParams, t: f64, dt: f64) -> Result<DfsCoefficients> {
    Ok(coefficients_ode_series(params, &[t], dt)?.remove(0))
}

/// RK4 coefficients at each of the (non-decreasing) `times`.
pub fn coefficients_ode_series(params: &ModelParams, times: &[f64], dt: f64) -> Result<Vec<DfsCoefficients>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "times must be finite, non-negative and sorted".into(),
        ));
    }
    if params.a2() == 0.0 {
        return Ok(times
            .iter()
            .map(|&t| DfsCoefficients {
                t,
                ..DfsCoefficients::initial()
            })
            .collect());
    }
    let mut a = DfsCoefficients::initial().as_array();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - now;
        let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                a = rk4_step(&a, h, |y| coefficient_rates(params, y));
            }
        }
        now = target;
        out.push(DfsCoefficients::from_array(target, a));
    }
    Ok(out)
}

/// The vectors spanning the subspace for excited qutrit `k` (0-based).
#[derive(Debug, Clone)]
pub struct DfsBasis {
    params: ModelParams,
    k: usize,
    ground: Vec<C64>,
    excited: Vec<C64>,
    e_vec: Vec<C64>,
    e_norm_sq: f64,
}

impl DfsBasis {
    pub fn new(params: &ModelParams, k: usize) -> Result<Self> {
        let n = params.n();
        if k >= n {
            return Err(Error::InvalidFactor { index: k, factors: n });
        }
        let dim = params.hilbert_dim();
        let (a2, a3) = (params.a2(), params.a3());
        let mixed = (a2 * a3).sqrt();
        let mut e_vec = vec![C64::new(0.0, 0.0); dim];
        for site in 0..n {
            let stride = 3usize.pow((n - 1 - site) as u32);
            if site != k {
                e_vec[stride] += a2;
            }
            e_vec[2 * stride] += mixed;
        }
        let e_norm_sq = e_vec.iter().map(|z| z.norm_sqr()).sum();
        Ok(Self {
            params: *params,
            k,
            ground: basis_vector(dim, 0),
            excited: single_excitation(n, k, 1),
            e_vec,
            e_norm_sq,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn excited_index(&self) -> usize {
        self.k
    }

    pub fn ground(&self) -> &[C64] {
        &self.ground
    }

    pub fn excited(&self) -> &[C64] {
        &self.excited
    }

    pub fn e_vector(&self) -> &[C64] {
        &self.e_vec
    }

    /// `⟨E|E⟩`, equal to `A2·β`.
    pub fn e_norm_sq(&self) -> f64 {
        self.e_norm_sq
    }

    /// `[|G⟩⟨G|, |k⟩⟨k|, |E⟩⟨E|, |E⟩⟨k| + |k⟩⟨E|]`.
    pub fn operators(&self) -> [ComplexMatrix; 4] {
        let mut x = ComplexMatrix::outer(&self.e_vec, &self.excited);
        x.add_scaled(C64::new(1.0, 0.0), &ComplexMatrix::outer(&self.excited, &self.e_vec));
        [
            ComplexMatrix::projector(&self.ground),
            ComplexMatrix::projector(&self.excited),
            ComplexMatrix::projector(&self.e_vec),
            x,
        ]
    }
}

/// Assembles the full `3^n` state from coefficients.
pub fn full_state(coeffs: &DfsCoefficients, basis: &DfsBasis) -> Result<DensityMatrix> {
    coeffs.check(&basis.params)?;
    let [g, k, e, x] = basis.operators();
    let mut m = g.scale_real(coeffs.a0);
    m.add_scaled(C64::new(coeffs.a1, 0.0), &k);
    m.add_scaled(C64::new(coeffs.a2, 0.0), &e);
    m.add_scaled(C64::new(coeffs.a3, 0.0), &x);
    // Positivity was established on the coefficients; the span has rank 3.
    Ok(DensityMatrix::from_parts_unchecked(m, vec![3; basis.params.n()]))
}

/// Two-qutrit state of the excited qutrit `k` (factor 0) and any other
/// qutrit `l` (factor 1), built directly in the 9-dimensional space:
///
/// `[a0 + (n−2)A2(A2+A3)a2] |00⟩⟨00| + a1 |10⟩⟨10| + a2 |e⟩⟨e| + a3 (|10⟩⟨e| + |e⟩⟨10|)`
/// with `|e⟩ = A2|01⟩ + √(A2A3)(|02⟩ + |20⟩)`.
pub fn reduced_pair_state(coeffs: &DfsCoefficients, params: &ModelParams) -> Result<DensityMatrix> {
    let n = params.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("pair state needs n >= 2, got n = {n}")));
    }
    let (a2, a3) = (params.a2(), params.a3());
    let mixed = (a2 * a3).sqrt();
    let mut e = vec![C64::new(0.0, 0.0); 9];
    e[1] = C64::new(a2, 0.0);
    e[2] = C64::new(mixed, 0.0);
    e[6] = C64::new(mixed, 0.0);
    let ten = basis_vector(9, 3);

    let mut m = ComplexMatrix::zeros(9);
    m[(0, 0)] = C64::new(coeffs.a0 + (n as f64 - 2.0) * a2 * (a2 + a3) * coeffs.a2, 0.0);
    m[(3, 3)] = C64::new(coeffs.a1, 0.0);
    m.add_scaled(C64::new(coeffs.a2, 0.0), &ComplexMatrix::projector(&e));
    m.add_scaled(C64::new(coeffs.a3, 0.0), &ComplexMatrix::outer(&ten, &e));
    m.add_scaled(C64::new(coeffs.a3, 0.0), &ComplexMatrix::outer(&e, &ten));
    DensityMatrix::new(m, vec![3, 3])
}

/// Image of each basis operator under the dissipator, projected onto the
/// span of the four basis operators.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// `coefficients[j][i]`: component of `D(B_j)` along `B_i`.
    pub coefficients: [[f64; 4]; 4],
    /// `‖D(B_j) − Π D(B_j)‖_F` per basis operator.
    pub residuals: [f64; 4],
}

impl ClosureReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Applies the full-register dissipator to each basis operator and measures
/// how far the image leaves the span. Requires `A2 > 0` (otherwise two basis
/// operators vanish).
pub fn closure_report(params: &ModelParams, k: usize) -> Result<ClosureReport> {
    if params.a2() == 0.0 {
        return Err(Error::InvalidParameter("closure needs A2 > 0".into()));
    }
    let basis = DfsBasis::new(params, k)?;
    let gen = Dissipator::for_params(params)?;
    let ops = basis.operators();

    let mut gram = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = ops[i].hs_inner(&ops[j]).re;
        }
    }
    let mut coefficients = [[0.0; 4]; 4];
    let mut residuals = [0.0; 4];
    for (j, op) in ops.iter().enumerate() {
        let image = gen.apply(op);
        let rhs: [f64; 4] = std::array::from_fn(|i| ops[i].hs_inner(&image).re);
        let c = solve4(gram, rhs)?;
        let mut resid = image.clone();
        for (ci, oi) in c.iter().zip(&ops) {
            resid.add_scaled(C64::new(-ci, 0.0), oi);
        }
        coefficients[j] = c;
        residuals[j] = resid.frobenius_norm();
    }
    Ok(ClosureReport {
        coefficients,
        residuals,
    })
}

/// Gaussian elimination with partial pivoting for a 4x4 system.
#[allow(clippy::needless_range_loop)]
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Result<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::InvalidParameter("singular Gram matrix".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..4 {
            let f = a[row][col] / a[col][col];
            for c in col..4 {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = ((row + 1)..4).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn params(n: usize, a2: f64, a3: f64) -> ModelParams {
        ModelParams::new(n, a2, a3).unwrap()
    }

    #[test]
    fn initial_conditions() {
        let c = coefficients_closed_form(&params(3, 1.0, 0.5), 0.0).unwrap();
        assert_eq!(c.as_array(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn negative_time_rejected() {
        assert!(coefficients_closed_form(&params(2, 1.0, 1.0), -0.1).is_err());
    }

    #[test]
    fn steady_state_two_qutrits() {
        // Fixed point of the generator on the trace shell with β = 3, γ = 4.
        let c = coefficients_closed_form(&params(2, 1.0, 1.0), 50.0).unwrap();
        let want = [0.25, 9.0 / 16.0, 1.0 / 16.0, -3.0 / 16.0];
        for (g, w) in c.as_array().iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        let rates = coefficient_rates(&params(2, 1.0, 1.0), &want);
        assert!(rates.iter().all(|r| r.abs() < 1e-15));
    }

    #[test]
    fn dark_initial_state_without_a2() {
        for n in 1..5 {
            for t in [0.0, 0.3, 4.0] {
                let p = params(n, 0.0, 1.0);
                assert_eq!(
                    coefficients_closed_form(&p, t).unwrap().as_array(),
                    [0.0, 1.0, 0.0, 0.0]
                );
                assert_eq!(coefficients_ode(&p, t, 1e-2).unwrap().as_array(), [0.0, 1.0, 0.0, 0.0]);
            }
        }
    }

    #[test]
    fn ode_matches_closed_form() {
        let p = params(2, 1.0, 1.0);
        let times = [0.1, 0.5, 1.0, 3.0];
        let ode = coefficients_ode_series(&p, &times, 1e-4).unwrap();
        for (o, &t) in ode.iter().zip(&times) {
            let cf = coefficients_closed_form(&p, t).unwrap();
            for (x, y) in o.as_array().iter().zip(cf.as_array()) {
                assert!((x - y).abs() <= 1e-8, "t = {t}: {o:?} vs {cf:?}");
            }
        }
    }

    #[test]
    fn trace_is_conserved_by_the_generator() {
        // Row combination (1, 1, A2β, 0) of the generator vanishes.
        for (n, a2, a3) in [(2, 1.0, 1.0), (3, 0.4, 1.7), (6, 2.0, 0.1)] {
            let p = params(n, a2, a3);
            let m = generator_matrix(&p);
            let w = [1.0, 1.0, a2 * p.beta(), 0.0];
            for col in 0..4 {
                let s: f64 = (0..4).map(|r| w[r] * m[r][col]).sum();
                assert!(s.abs() < 1e-12, "column {col}: {s}");
            }
        }
    }

    #[test]
    fn two_qutrit_system_specialization() {
        // At n = 2 the a2 equation reads ȧ2 = −2(A2 + 2A3) a2 − 2 a3.
        let (a2, a3) = (0.7, 0.45);
        let m = generator_matrix(&params(2, a2, a3));
        assert!((m[2][2] + 2.0 * (a2 + 2.0 * a3)).abs() < 1e-15);
        assert_eq!(m[2][3], -2.0);
        assert!((m[0][2] - 2.0 * a2 * (a2 + 2.0 * a3).powi(2)).abs() < 1e-14);
        assert!((m[3][3] + 2.0 * (a2 + a3)).abs() < 1e-15);
    }

    #[test]
    fn basis_orthogonality_and_norm() {
        for n in 2..=4 {
            for (a2, a3) in [(1.0, 1.0), (0.5, 1.0), (1.0, 0.1)] {
                let p = params(n, a2, a3);
                for k in 0..n {
                    let b = DfsBasis::new(&p, k).unwrap();
                    let dot = |x: &[C64], y: &[C64]| -> C64 { x.iter().zip(y).map(|(a, b)| a.conj() * b).sum() };
                    assert_eq!(dot(b.ground(), b.excited()).norm(), 0.0);
                    assert_eq!(dot(b.ground(), b.e_vector()).norm(), 0.0);
                    assert_eq!(dot(b.excited(), b.e_vector()).norm(), 0.0);
                    let want = a2 * a2 * (n as f64 - 1.0) + n as f64 * a2 * a3;
                    assert!((b.e_norm_sq() - want).abs() < 1e-12);
                    assert!((b.e_norm_sq() - a2 * p.beta()).abs() < 1e-12);
                }
            }
        }
        assert!(DfsBasis::new(&params(2, 1.0, 1.0), 2).is_err());
    }

    #[test]
    fn full_state_special_coefficients() {
        let p = params(3, 1.0, 0.5);
        let b = DfsBasis::new(&p, 1).unwrap();
        let k = full_state(&DfsCoefficients::initial(), &b).unwrap();
        assert_eq!(k.matrix(), &ComplexMatrix::projector(b.excited()));
        let g = DfsCoefficients {
            t: 0.0,
            a0: 1.0,
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
        };
        let g = full_state(&g, &b).unwrap();
        assert_eq!(g.matrix(), &ComplexMatrix::projector(b.ground()));
        let bad = DfsCoefficients {
            t: 0.0,
            a0: 0.5,
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
        };
        assert!(full_state(&bad, &b).is_err());
    }

    #[test]
    fn full_state_passes_density_validation() {
        let p = params(3, 1.0, 0.5);
        let b = DfsBasis::new(&p, 0).unwrap();
        for t in [0.0, 0.2, 1.0, 5.0] {
            let c = coefficients_closed_form(&p, t).unwrap();
            let rho = full_state(&c, &b).unwrap();
            DensityMatrix::new(rho.matrix().clone(), vec![3, 3, 3]).unwrap();
        }
    }

    #[test]
    fn pair_state_trace_and_corner() {
        for n in 2..=6 {
            for (a2, a3) in [(1.0, 1.0), (1.0, 0.1), (0.5, 1.0)] {
                let p = params(n, a2, a3);
                for t in [0.0, 0.4, 2.0] {
                    let c = coefficients_closed_form(&p, t).unwrap();
                    let rho = reduced_pair_state(&c, &p).unwrap();
                    assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
                    if n == 2 {
                        assert_eq!(rho.matrix()[(0, 0)].re, c.a0);
                    }
                }
            }
        }
        let p = params(1, 1.0, 1.0);
        assert!(reduced_pair_state(&DfsCoefficients::initial(), &p).is_err());
    }

    #[test]
    fn pair_state_matches_partial_trace_of_full_state() {
        let p = params(4, 1.0, 1.0);
        let c = coefficients_closed_form(&p, 2.0).unwrap();
        let direct = reduced_pair_state(&c, &p).unwrap();
        for (k, l) in [(0, 1), (0, 3), (1, 2)] {
            let full = full_state(&c, &DfsBasis::new(&p, k).unwrap()).unwrap();
            let traced = full.partial_trace(&[k, l]).unwrap();
            assert!(traced.matrix().max_abs_diff(direct.matrix()) < 1e-12, "pair ({k},{l})");
        }
    }

    #[test]
    fn closure_coefficients_match_generator() {
        let p = params(3, 0.8, 0.6);
        let rep = closure_report(&p, 2).unwrap();
        assert!(rep.max_residual() < 1e-10);
        let m = generator_matrix(&p);
        for j in 0..4 {
            for i in 0..4 {
                assert!(
                    (rep.coefficients[j][i] - m[i][j]).abs() < 1e-10,
                    "D(B_{j}) along B_{i}: {} vs {}",
                    rep.coefficients[j][i],
                    m[i][j]
                );
            }
        }
    }
}
