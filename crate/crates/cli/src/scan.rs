//! `scan`: pair correlations over a grid of `n` and times.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use qutrit_dfs::correlations::oracle::{discord_hs_oracle, OracleOptions};
use qutrit_dfs::correlations::{discord_lower_bound, negativity, CorrelationPoint};
use qutrit_dfs::dfs::{coefficients_closed_form, reduced_pair_state};
use qutrit_dfs::{Error, ModelParams};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::format::Table;
use crate::settings::{Settings, TimeGrid};
use crate::svg::{line_plot, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Negativity,
    DiscordLb,
    DiscordOracle,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::DiscordLb => "discord_lb",
            Measure::DiscordOracle => "discord_oracle",
        }
    }

    fn value(self, p: &CorrelationPoint) -> f64 {
        match self {
            Measure::Negativity => p.negativity,
            Measure::DiscordLb => p.discord_lb,
            Measure::DiscordOracle => p.discord_oracle.unwrap_or(f64::NAN),
        }
    }
}

impl FromStr for Measure {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "negativity" => Ok(Measure::Negativity),
            "discord_lb" | "discord-lb" => Ok(Measure::DiscordLb),
            "discord_oracle" | "discord-oracle" => Ok(Measure::DiscordOracle),
            other => Err(CliError::Usage(format!(
                "unknown measure {other:?} (expected negativity, discord_lb or discord_oracle)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub n_values: Vec<usize>,
    pub a2: f64,
    pub a3: f64,
    pub grid: TimeGrid,
    /// Sorted and deduplicated; decides the CSV columns after `t,n,a2,a3`.
    pub measures: Vec<Measure>,
    pub oracle: OracleOptions,
    pub output_path: Option<PathBuf>,
    pub emit_svg: bool,
}

impl ScanConfig {
    pub fn new(n_values: Vec<usize>, a2: f64, a3: f64, grid: TimeGrid, mut measures: Vec<Measure>) -> CliResult<Self> {
        if n_values.is_empty() {
            return Err(CliError::Usage("n list is empty".into()));
        }
        if let Some(n) = n_values.iter().find(|&&n| n < 2) {
            return Err(CliError::Usage(format!("scan needs n >= 2, got {n}")));
        }
        if measures.is_empty() {
            return Err(CliError::Usage("measure list is empty".into()));
        }
        for &n in &n_values {
            ModelParams::new(n, a2, a3)?;
        }
        measures.sort();
        measures.dedup();
        Ok(Self {
            n_values,
            a2,
            a3,
            grid,
            measures,
            oracle: OracleOptions::default(),
            output_path: None,
            emit_svg: false,
        })
    }

    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let measures = match s.measures()? {
            Some(list) => list.iter().map(|m| m.parse()).collect::<CliResult<Vec<_>>>()?,
            None => vec![Measure::Negativity, Measure::DiscordLb],
        };
        let mut cfg = Self::new(
            s.n_values()?.unwrap_or_else(|| vec![2]),
            s.a2()?.unwrap_or(1.0),
            s.a3()?.unwrap_or(1.0),
            TimeGrid::from_settings(s)?,
            measures,
        )?;
        cfg.oracle.seed = s.seed()?.unwrap_or(0);
        if let Some(r) = s.restarts()? {
            if r == 0 {
                return Err(CliError::Usage("restarts must be at least 1".into()));
            }
            cfg.oracle.restarts = r;
        }
        cfg.output_path = s.out()?;
        cfg.emit_svg = s.emit_svg()?;
        if cfg.emit_svg && cfg.output_path.is_none() {
            return Err(CliError::Usage("--emit-svg needs --out".into()));
        }
        Ok(cfg)
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["t", "n", "a2", "a3"];
        h.extend(self.measures.iter().map(|m| m.name()));
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub a2: f64,
    pub a3: f64,
    pub point: CorrelationPoint,
}

impl ScanRow {
    pub fn value(&self, m: Measure) -> f64 {
        m.value(&self.point)
    }
}

fn evaluate(params: &ModelParams, t: f64, oracle: Option<&OracleOptions>) -> qutrit_dfs::Result<CorrelationPoint> {
    let coeffs = coefficients_closed_form(params, t)?;
    coeffs.check(params)?;
    let rho = reduced_pair_state(&coeffs, params)?;
    Ok(CorrelationPoint {
        t,
        negativity: negativity(&rho, 0)?,
        discord_lb: discord_lower_bound(&rho)?,
        discord_oracle: oracle.map(|o| discord_hs_oracle(&rho, o)).transpose()?.map(|r| r.value),
    })
}

/// Rows ordered by `n` (as listed) and then time.
pub fn run_scan(cfg: &ScanConfig) -> CliResult<Vec<ScanRow>> {
    let times = cfg.grid.times();
    let oracle = cfg.measures.contains(&Measure::DiscordOracle).then_some(&cfg.oracle);
    let cells: Vec<(usize, f64)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| times.iter().map(move |&t| (n, t)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, t)| {
            let params = ModelParams::new(n, cfg.a2, cfg.a3)?;
            let point = evaluate(&params, t, oracle).map_err(|e| Error::AtTime { t, source: Box::new(e) })?;
            Ok(ScanRow {
                n,
                a2: cfg.a2,
                a3: cfg.a3,
                point,
            })
        })
        .collect::<qutrit_dfs::Result<Vec<_>>>()?;
    Ok(rows)
}

pub fn scan_table(cfg: &ScanConfig, rows: &[ScanRow]) -> Table {
    let mut table = Table::new(&cfg.header());
    for r in rows {
        let mut v = vec![r.point.t, r.n as f64, r.a2, r.a3];
        v.extend(cfg.measures.iter().map(|&m| r.value(m)));
        table.rows.push(v);
    }
    table
}

/// One curve per `(n, a2, a3)` combination, in first-seen order.
pub fn curves(rows: &[ScanRow], m: Measure) -> Vec<Series> {
    let mut out: Vec<((usize, u64, u64), Series)> = Vec::new();
    for r in rows {
        let key = (r.n, r.a2.to_bits(), r.a3.to_bits());
        let idx = match out.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                let label = format!("n={} A2={} A3={}", r.n, r.a2, r.a3);
                out.push((
                    key,
                    Series {
                        label,
                        points: Vec::new(),
                    },
                ));
                out.len() - 1
            }
        };
        out[idx].1.points.push((r.point.t, r.value(m)));
    }
    out.into_iter().map(|(_, s)| s).collect()
}

/// `<stem>_<measure>.svg` next to the CSV.
pub fn svg_path(csv: &Path, m: Measure) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("scan");
    csv.with_file_name(format!("{stem}_{}.svg", m.name()))
}

pub fn write_svgs(cfg: &ScanConfig, rows: &[ScanRow], csv: &Path) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for &m in &cfg.measures {
        let path = svg_path(csv, m);
        let svg = line_plot(m.name(), "t", m.name(), &curves(rows, m));
        std::fs::write(&path, svg).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        written.push(path);
    }
    Ok(written)
}
