//! `validate`: the invariant suite at desk scale, as a JSON report.

use std::str::FromStr;

use qutrit_dfs::correlations::oracle::{discord_hs_oracle, OracleOptions};
use qutrit_dfs::correlations::{discord_lower_bound, negativity};
use qutrit_dfs::dfs::{closure_report, coefficients_closed_form, coefficients_ode_series, DfsBasis, DfsCoefficients};
use qutrit_dfs::linalg::{kron, trace_distance, ComplexMatrix, DensityMatrix, C64};
use qutrit_dfs::lindblad::{evolve_to_times, single_excitation, Dissipator};
use qutrit_dfs::random::{random_product_state, random_separable, random_two_qutrit, random_unitary};
use qutrit_dfs::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::claims::{plateau, time_to_plateau, worst_increase};
use crate::error::{CliError, CliResult};
use crate::scan::{run_scan, Measure, ScanConfig, ScanRow};
use crate::settings::{Settings, TimeGrid};

pub const ORACLE_PAIRS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, 0.5), (1.0, 0.1), (0.5, 1.0)];

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub check: String,
    pub tolerance: f64,
    pub observed: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `observed ≤ tolerance`.
    pub fn at_most(check: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            tolerance,
            observed,
            pass: observed <= tolerance,
        }
    }

    /// Passes when `observed < tolerance`.
    pub fn below(check: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            tolerance,
            observed,
            pass: observed < tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub pass: bool,
    pub skipped: Vec<&'static str>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.check.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Closure,
    Coefficients,
    /// Full-register Lindblad integration.
    Oracle,
    Negativity,
    Discord,
    /// Nelder-Mead discord oracle.
    DiscordOracle,
    Claims,
}

impl Group {
    pub const ALL: [Group; 7] = [
        Group::Closure,
        Group::Coefficients,
        Group::Oracle,
        Group::Negativity,
        Group::Discord,
        Group::DiscordOracle,
        Group::Claims,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Closure => "closure",
            Group::Coefficients => "coefficients",
            Group::Oracle => "oracle",
            Group::Negativity => "negativity",
            Group::Discord => "discord",
            Group::DiscordOracle => "discord-oracle",
            Group::Claims => "claims",
        }
    }
}

impl FromStr for Group {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s || g.name().replace('-', "_") == s)
            .ok_or_else(|| {
                let names: Vec<_> = Group::ALL.iter().map(|g| g.name()).collect();
                CliError::Usage(format!(
                    "unknown check group {s:?} (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Deliberate errors used to confirm that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Uses `A2²/γ` instead of `A2/γ` as the prefactor of `a0`.
    A0Prefactor,
}

impl FromStr for Fault {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "a0-prefactor" => Ok(Fault::A0Prefactor),
            other => Err(CliError::Usage(format!("unknown fault {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidateConfig {
    pub skip: Vec<Group>,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl ValidateConfig {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        Ok(Self {
            skip: s.skip()?.iter().map(|g| g.parse()).collect::<CliResult<_>>()?,
            seed: s.seed()?.unwrap_or(0),
            fault: s.inject_fault()?.map(|f| f.parse()).transpose()?,
        })
    }
}

pub fn run_validate(cfg: &ValidateConfig) -> CliResult<Report> {
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for g in Group::ALL {
        if cfg.skip.contains(&g) {
            skipped.push(g.name());
            continue;
        }
        checks.extend(match g {
            Group::Closure => closure_checks()?,
            Group::Coefficients => coefficient_checks()?,
            Group::Oracle => oracle_checks(cfg.fault)?,
            Group::Negativity => negativity_checks(cfg.seed)?,
            Group::Discord => discord_checks(cfg.seed)?,
            Group::DiscordOracle => discord_oracle_checks(cfg.seed)?,
            Group::Claims => claim_checks()?,
        });
    }
    Ok(Report {
        pass: checks.iter().all(|c| c.pass),
        skipped,
        checks,
    })
}

fn closure_checks() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for n in 2..=5 {
        let mut worst = 0.0f64;
        for (a2, a3) in ORACLE_PAIRS {
            let p = ModelParams::new(n, a2, a3)?;
            worst = worst.max(closure_report(&p, 0)?.max_residual());
        }
        out.push(Check::at_most(format!("dfs_closure_residual_n{n}"), worst, 1e-10));
    }
    Ok(out)
}

fn coefficient_checks() -> CliResult<Vec<Check>> {
    let grid = TimeGrid::new(5.0, 501)?.times();
    let mut trace = 0.0f64;
    for n in 2..=6 {
        for (a2, a3) in ORACLE_PAIRS {
            let p = ModelParams::new(n, a2, a3)?;
            for &t in &grid {
                trace = trace.max((coefficients_closed_form(&p, t)?.trace(&p) - 1.0).abs());
            }
        }
    }

    let coarse = TimeGrid::new(5.0, 101)?.times();
    let mut ode = 0.0f64;
    for n in 2..=4 {
        for (a2, a3) in ORACLE_PAIRS {
            let p = ModelParams::new(n, a2, a3)?;
            let series = coefficients_ode_series(&p, &coarse, 1e-4)?;
            for c in &series {
                ode = ode.max(max_diff(c, &coefficients_closed_form(&p, c.t)?));
            }
        }
    }

    let p = ModelParams::new(2, 1.0, 1.0)?;
    let steady = DfsCoefficients {
        t: 10.0,
        a0: 0.25,
        a1: 9.0 / 16.0,
        a2: 1.0 / 16.0,
        a3: -3.0 / 16.0,
    };
    let by_ode = coefficients_ode_series(&p, &[10.0], 1e-3)?[0];
    let steady_err = max_diff(&by_ode, &steady).max(max_diff(&coefficients_closed_form(&p, 10.0)?, &steady));

    let dark = ModelParams::new(2, 0.0, 1.0)?;
    let init = DfsCoefficients::initial();
    let mut dark_err = 0.0f64;
    for c in coefficients_ode_series(&dark, &coarse, 1e-3)? {
        dark_err = dark_err
            .max(max_diff(&c, &init))
            .max(max_diff(&coefficients_closed_form(&dark, c.t)?, &init));
    }

    Ok(vec![
        Check::at_most("coefficient_trace_identity", trace, 1e-9),
        Check::at_most("ode_vs_closed_form", ode, 1e-8),
        Check::at_most("steady_state_n2", steady_err, 1e-8),
        Check::at_most("dark_initial_state", dark_err, 1e-15),
    ])
}

fn max_diff(a: &DfsCoefficients, b: &DfsCoefficients) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `Σ_i a_i B_i` without validation, so a faulty coefficient set still yields
/// a matrix to compare.
pub fn dfs_matrix(basis: &DfsBasis, c: &DfsCoefficients, fault: Option<Fault>) -> ComplexMatrix {
    let mut a = c.as_array();
    if fault == Some(Fault::A0Prefactor) {
        a[0] *= basis.params().a2();
    }
    let ops = basis.operators();
    let mut m = ComplexMatrix::zeros(ops[0].dim());
    for (ai, op) in a.iter().zip(&ops) {
        m.add_scaled(C64::new(*ai, 0.0), op);
    }
    m
}

/// Largest trace distance and trace drift of one RK4 run against the DFS state.
pub fn oracle_agreement(p: &ModelParams, times: &[f64], dt: f64, fault: Option<Fault>) -> CliResult<(f64, f64)> {
    let gen = Dissipator::for_params(p)?;
    let rho0 = DensityMatrix::pure(&single_excitation(p.n(), 0, 1), vec![3; p.n()])?;
    let basis = DfsBasis::new(p, 0)?;
    let mut dist = 0.0f64;
    let mut drift = 0.0f64;
    for s in evolve_to_times(&gen, &rho0, times, dt)? {
        let dfs = dfs_matrix(&basis, &coefficients_closed_form(p, s.t)?, fault);
        dist = dist.max(trace_distance(s.state.matrix(), &dfs)?);
        drift = drift.max((s.state.matrix().trace().re - 1.0).abs());
    }
    Ok((dist, drift))
}

/// Terminal trace-distance error of RK4 at each step size.
pub fn rk4_errors(p: &ModelParams, t_end: f64, dts: &[f64]) -> CliResult<Vec<f64>> {
    let gen = Dissipator::for_params(p)?;
    let rho0 = DensityMatrix::pure(&single_excitation(p.n(), 0, 1), vec![3; p.n()])?;
    let basis = DfsBasis::new(p, 0)?;
    let exact = dfs_matrix(&basis, &coefficients_closed_form(p, t_end)?, None);
    dts.iter()
        .map(|&dt| {
            let s = evolve_to_times(&gen, &rho0, &[t_end], dt)?;
            Ok(trace_distance(s[0].state.matrix(), &exact)?)
        })
        .collect()
}

pub const CONVERGENCE_DTS: [f64; 4] = [0.04, 0.02, 0.01, 0.005];
pub const CONVERGENCE_T_END: f64 = 1.0;

fn oracle_checks(fault: Option<Fault>) -> CliResult<Vec<Check>> {
    let times: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64).collect();
    let cases: Vec<(usize, f64, f64)> = (2..=4)
        .flat_map(|n| ORACLE_PAIRS.into_iter().map(move |(a2, a3)| (n, a2, a3)))
        .collect();
    let results = cases
        .par_iter()
        .map(|&(n, a2, a3)| oracle_agreement(&ModelParams::new(n, a2, a3)?, &times, 1e-3, fault))
        .collect::<CliResult<Vec<_>>>()?;
    let dist = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let drift = results.iter().map(|r| r.1).fold(0.0, f64::max);

    let errs = rk4_errors(&ModelParams::new(2, 1.0, 1.0)?, CONVERGENCE_T_END, &CONVERGENCE_DTS)?;
    let worst_ratio = errs.windows(2).map(|w| (w[0] / w[1] - 16.0).abs()).fold(0.0, f64::max);

    Ok(vec![
        Check::at_most("oracle_agreement_trace_distance", dist, 1e-6),
        Check::at_most("rk4_trace_drift", drift, 1e-9),
        // ratio within [12, 20]
        Check::at_most("rk4_halving_ratio_minus_16", worst_ratio, 4.0),
    ])
}

fn negativity_checks(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sep = 0.0f64;
    for i in 0..100 {
        sep = sep.max(negativity(&random_separable(&mut rng, 1 + i % 6), 0)?);
    }

    let mut v = vec![C64::new(0.0, 0.0); 9];
    v[1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let bell = (negativity(&DensityMatrix::pure(&v, vec![3, 3])?, 0)? - 0.5).abs();

    let mut lu = 0.0f64;
    for _ in 0..20 {
        let rho = random_two_qutrit(&mut rng);
        let u = kron(&random_unitary(&mut rng, 3), &random_unitary(&mut rng, 3));
        let rotated = DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint()).hermitian_part(), vec![3, 3])?;
        lu = lu.max((negativity(&rotated, 0)? - negativity(&rho, 0)?).abs());
    }

    Ok(vec![
        Check::at_most("negativity_separable_zero", sep, 1e-12),
        Check::at_most("negativity_bell_half", bell, 1e-10),
        Check::at_most("negativity_local_unitary_invariance", lu, 1e-10),
    ])
}

fn discord_checks(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut negative = 0.0f64;
    for _ in 0..100 {
        negative = negative.max(-discord_lower_bound(&random_two_qutrit(&mut rng))?);
    }
    let mut product = 0.0f64;
    for _ in 0..50 {
        product = product.max(discord_lower_bound(&random_product_state(&mut rng))?);
    }
    Ok(vec![
        Check::at_most("discord_lb_nonnegative", negative, 0.0),
        Check::at_most("discord_lb_product_zero", product, 1e-10),
    ])
}

fn discord_oracle_checks(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let states: Vec<DensityMatrix> = (0..50).map(|_| random_two_qutrit(&mut rng)).collect();
    let opts = OracleOptions {
        seed,
        ..Default::default()
    };
    let gaps = states
        .par_iter()
        .map(|rho| Ok(discord_lower_bound(rho)? - discord_hs_oracle(rho, &opts)?.value))
        .collect::<qutrit_dfs::Result<Vec<f64>>>()?;
    let gap = gaps.into_iter().fold(f64::NEG_INFINITY, f64::max);

    let a = discord_hs_oracle(&states[0], &opts)?;
    let b = discord_hs_oracle(&states[0], &opts)?;
    let same = if a.value.to_bits() == b.value.to_bits() && a.params == b.params {
        0.0
    } else {
        (a.value - b.value).abs().max(f64::MIN_POSITIVE)
    };
    Ok(vec![
        Check::at_most("discord_lb_below_oracle", gap, 1e-6),
        Check::at_most("discord_oracle_deterministic", same, 0.0),
    ])
}

fn measure_curves(rows: &[ScanRow], m: Measure) -> Vec<Vec<(f64, f64)>> {
    crate::scan::curves(rows, m).into_iter().map(|s| s.points).collect()
}

fn claim_checks() -> CliResult<Vec<Check>> {
    let grid = TimeGrid::new(5.0, 501)?;
    let m = vec![Measure::Negativity];
    let by_n = measure_curves(
        &run_scan(&ScanConfig::new(vec![2, 3, 4, 5, 6], 1.0, 1.0, grid, m.clone())?)?,
        Measure::Negativity,
    );
    let mut by_pair = Vec::new();
    for (a2, a3) in crate::figures::PAIR_SWEEP {
        by_pair.extend(measure_curves(
            &run_scan(&ScanConfig::new(vec![2], a2, a3, grid, m.clone())?)?,
            Measure::Negativity,
        ));
    }

    let start = by_n.iter().chain(&by_pair).map(|c| c[0].1.abs()).fold(0.0, f64::max);
    let plateaus_n: Vec<f64> = by_n.iter().map(|c| plateau(c)).collect();
    let plateaus_pair: Vec<f64> = by_pair.iter().map(|c| plateau(c)).collect();
    let settle_n: Vec<f64> = by_n.iter().map(|c| time_to_plateau(c, 0.01)).collect();
    Ok(vec![
        Check::at_most("negativity_starts_at_zero", start, 1e-12),
        Check::below("negativity_plateau_decreases_with_n", worst_increase(&plateaus_n), 0.0),
        Check::below(
            "negativity_plateau_decreases_with_asymmetry",
            worst_increase(&plateaus_pair),
            0.0,
        ),
        Check::below(
            "negativity_settling_time_decreases_with_n",
            worst_increase(&settle_n),
            0.0,
        ),
    ])
}
