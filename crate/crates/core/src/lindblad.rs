//! Brute-force Lindblad integration on the full `3^n` register.
//!
//! The generator is purely dissipative with a single collective jump
//! operator `L = Σ_i (√A2 |0⟩⟨1| + √A3 |0⟩⟨2|)_i`:
//!
//! `dρ/dt = 2 L ρ L† − L†L ρ − ρ L†L`.

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, kron, ComplexMatrix, DensityMatrix, C64};
use crate::model::ModelParams;
use crate::rk4::rk4_step;
use crate::tol::HERMITIAN_TOL;

/// Largest register the dense oracle will build (`3^6 = 729`).
pub const MAX_ORACLE_QUTRITS: usize = 6;

/// Single-qutrit lowering piece `√A2 |0⟩⟨1| + √A3 |0⟩⟨2|`.
pub fn single_qutrit_jump(a2: f64, a3: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(3);
    m[(0, 1)] = C64::new(a2.sqrt(), 0.0);
    m[(0, 2)] = C64::new(a3.sqrt(), 0.0);
    m
}

/// Collective jump operator on `n` qutrits.
pub fn build_collective_jump(params: &ModelParams) -> Result<ComplexMatrix> {
    let n = params.n();
    if n > MAX_ORACLE_QUTRITS {
        return Err(Error::TooManyQutrits {
            n,
            cap: MAX_ORACLE_QUTRITS,
        });
    }
    let local = single_qutrit_jump(params.a2(), params.a3());
    let id = ComplexMatrix::identity(3);
    let mut total = ComplexMatrix::zeros(params.hilbert_dim());
    for site in 0..n {
        let mut term = if site == 0 { local.clone() } else { id.clone() };
        for k in 1..n {
            term = kron(&term, if k == site { &local } else { &id });
        }
        total.add_scaled(C64::new(1.0, 0.0), &term);
    }
    Ok(total)
}

/// `2LρL† − L†Lρ − ρL†L` evaluated densely.
pub fn dissipator(l: &ComplexMatrix, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    dissipator_op(l, rho.matrix())
}

/// Dissipator applied to an arbitrary operator (not necessarily a state).
pub fn dissipator_op(l: &ComplexMatrix, op: &ComplexMatrix) -> Result<ComplexMatrix> {
    if l.dim() != op.dim() {
        return Err(Error::DimensionMismatch(format!(
            "jump operator dim {} vs operator dim {}",
            l.dim(),
            op.dim()
        )));
    }
    let ld = l.adjoint();
    let ldl = ld.matmul(l);
    let mut out = l.matmul(op).matmul(&ld).scale_real(2.0);
    out.add_scaled(C64::new(-1.0, 0.0), &ldl.matmul(op));
    out.add_scaled(C64::new(-1.0, 0.0), &op.matmul(&ldl));
    Ok(out)
}

/// Compressed-row storage; collective jump operators are very sparse.
#[derive(Debug, Clone)]
struct SparseRows {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseRows {
    fn from_dense(m: &ComplexMatrix) -> Self {
        let rows = (0..m.dim())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                    .map(|(j, z)| (j, *z))
                    .collect()
            })
            .collect();
        Self { rows }
    }
}

/// Precomputed sparse form of the dissipator for repeated application.
#[derive(Debug, Clone)]
pub struct Dissipator {
    dim: usize,
    l: SparseRows,
    ldl: SparseRows,
}

impl Dissipator {
    pub fn new(l: &ComplexMatrix) -> Self {
        let ldl = l.adjoint().matmul(l);
        Self {
            dim: l.dim(),
            l: SparseRows::from_dense(l),
            ldl: SparseRows::from_dense(&ldl),
        }
    }

    pub fn for_params(params: &ModelParams) -> Result<Self> {
        Ok(Self::new(&build_collective_jump(params)?))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        assert_eq!(rho.dim(), n, "dissipator dimension mismatch");
        let r = rho.as_slice();
        let zero = C64::new(0.0, 0.0);

        // A = L ρ
        let mut a = vec![zero; n * n];
        for (i, row) in self.l.rows.iter().enumerate() {
            let out = &mut a[i * n..(i + 1) * n];
            for &(k, v) in row {
                for (o, x) in out.iter_mut().zip(&r[k * n..(k + 1) * n]) {
                    *o += v * x;
                }
            }
        }

        let mut res = ComplexMatrix::zeros(n);
        let out = res.as_mut_slice();
        // 2 A L†: (A L†)_ij = Σ_k A_ik conj(L_jk)
        for i in 0..n {
            let a_row = &a[i * n..(i + 1) * n];
            for (j, lrow) in self.l.rows.iter().enumerate() {
                let mut acc = zero;
                for &(k, v) in lrow {
                    acc += a_row[k] * v.conj();
                }
                out[i * n + j] += acc * 2.0;
            }
        }
        // − L†L ρ
        for (i, row) in self.ldl.rows.iter().enumerate() {
            let o_row = &mut out[i * n..(i + 1) * n];
            for &(k, v) in row {
                for (o, x) in o_row.iter_mut().zip(&r[k * n..(k + 1) * n]) {
                    *o -= v * x;
                }
            }
        }
        // − ρ L†L
        for i in 0..n {
            for (k, row) in self.ldl.rows.iter().enumerate() {
                let x = r[i * n + k];
                if x.re == 0.0 && x.im == 0.0 {
                    continue;
                }
                for &(j, v) in row {
                    out[i * n + j] -= x * v;
                }
            }
        }
        res
    }
}

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    dt: f64,
    t_end: f64,
    record_every: usize,
}

impl IntegratorConfig {
    pub const DEFAULT_DT: f64 = 1e-3;

    pub fn new(dt: f64, t_end: f64, record_every: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
        }
        if dt > t_end {
            return Err(Error::InvalidParameter(format!("dt = {dt} exceeds t_end = {t_end}")));
        }
        if record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be at least 1".into()));
        }
        Ok(Self {
            dt,
            t_end,
            record_every,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn record_every(&self) -> usize {
        self.record_every
    }

    /// Number of RK4 steps; `t_end` is rounded to a whole number of steps.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil() as usize
    }
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone)]
pub struct Sample {
    pub t: f64,
    pub state: DensityMatrix,
    /// Hermiticity deviation observed before re-symmetrization.
    pub hermiticity_drift: f64,
}

/// Integrates the master equation from `rho0`, recording every
/// `cfg.record_every` steps plus the initial and final states.
pub fn integrate(rho0: &DensityMatrix, params: &ModelParams, cfg: &IntegratorConfig) -> Result<Vec<Sample>> {
    let gen = Dissipator::for_params(params)?;
    integrate_with(&gen, rho0, cfg)
}

/// As [`integrate`], with a prebuilt generator.
pub fn integrate_with(gen: &Dissipator, rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<Vec<Sample>> {
    if rho0.dim() != gen.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dim {} vs generator dim {}",
            rho0.dim(),
            gen.dim()
        )));
    }
    let dims = rho0.factor_dims().to_vec();
    let steps = cfg.steps();
    let mut samples = vec![Sample {
        t: 0.0,
        state: rho0.clone(),
        hermiticity_drift: 0.0,
    }];
    let mut rho = rho0.matrix().clone();
    for step in 1..=steps {
        rho = rk4_step(&rho, cfg.dt, |r| gen.apply(r));
        if step % cfg.record_every == 0 || step == steps {
            let t = step as f64 * cfg.dt;
            let drift = rho.hermiticity_deviation();
            let at = |e: Error| Error::AtTime { t, source: Box::new(e) };
            if drift > HERMITIAN_TOL {
                return Err(at(Error::InvariantViolation {
                    check: "hermiticity drift",
                    observed: drift,
                    tolerance: HERMITIAN_TOL,
                }));
            }
            rho = rho.hermitian_part();
            let state = DensityMatrix::new(rho.clone(), dims.clone()).map_err(at)?;
            samples.push(Sample {
                t,
                state,
                hermiticity_drift: drift,
            });
        }
    }
    Ok(samples)
}

/// Integrates to each of the sorted `times`, shortening the step on each
/// segment so every requested time is hit exactly. Samples are validated as
/// in [`integrate_with`].
pub fn evolve_to_times(gen: &Dissipator, rho0: &DensityMatrix, times: &[f64], dt: f64) -> Result<Vec<Sample>> {
    if rho0.dim() != gen.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dim {} vs generator dim {}",
            rho0.dim(),
            gen.dim()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "times must be finite, non-negative and sorted".into(),
        ));
    }
    let dims = rho0.factor_dims().to_vec();
    let mut rho = rho0.matrix().clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let span = t - now;
        let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
        let mut drift = 0.0f64;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                rho = rk4_step(&rho, h, |r| gen.apply(r));
            }
            drift = rho.hermiticity_deviation();
        }
        now = t;
        let at = |e: Error| Error::AtTime { t, source: Box::new(e) };
        if drift > HERMITIAN_TOL {
            return Err(at(Error::InvariantViolation {
                check: "hermiticity drift",
                observed: drift,
                tolerance: HERMITIAN_TOL,
            }));
        }
        rho = rho.hermitian_part();
        let state = DensityMatrix::new(rho.clone(), dims.clone()).map_err(at)?;
        out.push(Sample {
            t,
            state,
            hermiticity_drift: drift,
        });
    }
    Ok(out)
}

/// `|k⟩`: qutrit `k` (0-based factor index) in `|1⟩`, all others in `|0⟩`.
pub fn single_excitation(n: usize, k: usize, level: usize) -> Vec<C64> {
    assert!(k < n && level < 3);
    let dim = 3usize.pow(n as u32);
    let index = level * 3usize.pow((n - 1 - k) as u32);
    basis_vector(dim, index)
}
