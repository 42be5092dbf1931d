//! `evolve`: coefficient or full-register time series for one parameter set.

use std::str::FromStr;

use qutrit_dfs::dfs::{coefficients_closed_form, coefficients_ode_series, full_state, DfsBasis, DfsCoefficients};
use qutrit_dfs::linalg::{trace_distance, DensityMatrix};
use qutrit_dfs::lindblad::{evolve_to_times, single_excitation, Dissipator};
use qutrit_dfs::{Error, ModelParams};

use crate::error::{CliError, CliResult};
use crate::format::Table;
use crate::settings::{Settings, TimeGrid};

pub const DEFAULT_ODE_DT: f64 = 1e-4;
pub const DEFAULT_ORACLE_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Ode,
    Oracle,
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "closed-form" | "closed_form" => Ok(Method::ClosedForm),
            "ode" => Ok(Method::Ode),
            "oracle" => Ok(Method::Oracle),
            other => Err(CliError::Usage(format!(
                "unknown method {other:?} (expected closed-form, ode or oracle)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveConfig {
    pub params: ModelParams,
    pub grid: TimeGrid,
    pub method: Method,
    /// Integrator step; defaults depend on the method.
    pub dt: Option<f64>,
}

impl EvolveConfig {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let n = match s.n_values()?.as_deref() {
            None => 2,
            Some([n]) => *n,
            Some(list) => return Err(CliError::Usage(format!("evolve takes a single n, got {list:?}"))),
        };
        let params = ModelParams::new(n, s.a2()?.unwrap_or(1.0), s.a3()?.unwrap_or(1.0))?;
        let method = s.method()?.as_deref().unwrap_or("closed-form").parse()?;
        Ok(Self {
            params,
            grid: TimeGrid::from_settings(s)?,
            method,
            dt: s.dt()?,
        })
    }
}

pub const COEFFICIENT_HEADER: &[&str] = &["t", "a0", "a1", "a2", "a3"];
pub const ORACLE_HEADER: &[&str] = &[
    "t",
    "trace",
    "min_eigenvalue",
    "purity",
    "hermiticity_drift",
    "ground_population",
    "excited_population",
    "dfs_trace_distance",
];

fn at(t: f64, e: Error) -> Error {
    match e {
        e @ Error::AtTime { .. } => e,
        e => Error::AtTime { t, source: Box::new(e) },
    }
}

fn coefficient_table(params: &ModelParams, series: &[DfsCoefficients]) -> CliResult<Table> {
    let mut table = Table::new(COEFFICIENT_HEADER);
    for c in series {
        c.check(params).map_err(|e| at(c.t, e))?;
        table.rows.push(vec![c.t, c.a0, c.a1, c.a2, c.a3]);
    }
    Ok(table)
}

pub fn run_evolve(cfg: &EvolveConfig) -> CliResult<Table> {
    let p = &cfg.params;
    let times = cfg.grid.times();
    match cfg.method {
        Method::ClosedForm => {
            let series = times
                .iter()
                .map(|&t| coefficients_closed_form(p, t))
                .collect::<qutrit_dfs::Result<Vec<_>>>()?;
            coefficient_table(p, &series)
        }
        Method::Ode => {
            let series = coefficients_ode_series(p, &times, cfg.dt.unwrap_or(DEFAULT_ODE_DT))?;
            coefficient_table(p, &series)
        }
        Method::Oracle => oracle_table(p, &times, cfg.dt.unwrap_or(DEFAULT_ORACLE_DT)),
    }
}

fn oracle_table(p: &ModelParams, times: &[f64], dt: f64) -> CliResult<Table> {
    let n = p.n();
    let gen = Dissipator::for_params(p)?;
    let ket = single_excitation(n, 0, 1);
    let excited = ket.iter().position(|z| z.re == 1.0).expect("basis ket");
    let rho0 = DensityMatrix::pure(&ket, vec![3; n])?;
    let basis = DfsBasis::new(p, 0)?;
    let samples = evolve_to_times(&gen, &rho0, times, dt)?;

    let mut table = Table::new(ORACLE_HEADER);
    for s in samples {
        let m = s.state.matrix();
        let dfs = full_state(&coefficients_closed_form(p, s.t)?, &basis).map_err(|e| at(s.t, e))?;
        table.rows.push(vec![
            s.t,
            m.trace().re,
            s.state.min_eigenvalue().map_err(|e| at(s.t, e))?,
            s.state.purity(),
            s.hermiticity_drift,
            m[(0, 0)].re,
            m[(excited, excited)].re,
            trace_distance(m, dfs.matrix()).map_err(|e| at(s.t, e))?,
        ]);
    }
    Ok(table)
}
