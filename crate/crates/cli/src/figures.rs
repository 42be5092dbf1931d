//! `reproduce-figures`: fixed sweeps for the negativity and discord figures.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};
use crate::format::Table;
use crate::scan::{curves, run_scan, Measure, ScanConfig, ScanRow};
use crate::settings::{Settings, TimeGrid};
use crate::svg::line_plot;

/// `(A2, A3)` pairs for the two-qutrit figures.
pub const PAIR_SWEEP: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 0.5), (1.0, 0.1)];
/// Register sizes for the n-qutrit figures, at `A2 = A3 = 1`.
pub const N_SWEEP: [usize; 5] = [2, 3, 4, 5, 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn measure(self) -> Measure {
        match self {
            Figure::Fig2 | Figure::Fig3 => Measure::Negativity,
            Figure::Fig4 | Figure::Fig5 => Measure::DiscordLb,
        }
    }

    fn title(self) -> &'static str {
        match self {
            Figure::Fig2 => "Negativity, two qutrits",
            Figure::Fig3 => "Negativity, n qutrits",
            Figure::Fig4 => "Discord lower bound, two qutrits",
            Figure::Fig5 => "Discord lower bound, n qutrits",
        }
    }

    fn sweeps_pairs(self) -> bool {
        matches!(self, Figure::Fig2 | Figure::Fig4)
    }
}

impl FromStr for Figure {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown figure {s:?} (expected fig2, fig3, fig4 or fig5)")))
    }
}

/// Scan rows for one figure, curve by curve.
pub fn figure_rows(fig: Figure, grid: TimeGrid) -> CliResult<Vec<ScanRow>> {
    let m = vec![fig.measure()];
    if fig.sweeps_pairs() {
        let mut rows = Vec::new();
        for (a2, a3) in PAIR_SWEEP {
            rows.extend(run_scan(&ScanConfig::new(vec![2], a2, a3, grid, m.clone())?)?);
        }
        Ok(rows)
    } else {
        run_scan(&ScanConfig::new(N_SWEEP.to_vec(), 1.0, 1.0, grid, m)?)
    }
}

pub fn figure_table(fig: Figure, rows: &[ScanRow]) -> Table {
    let m = fig.measure();
    let mut table = Table::new(&["t", "n", "a2", "a3", m.name()]);
    table.rows = rows
        .iter()
        .map(|r| vec![r.point.t, r.n as f64, r.a2, r.a3, r.value(m)])
        .collect();
    table
}

pub fn figure_svg(fig: Figure, rows: &[ScanRow]) -> String {
    let m = fig.measure();
    line_plot(fig.title(), "t", m.name(), &curves(rows, m))
}

#[derive(Debug, Clone)]
pub struct FiguresConfig {
    pub which: Vec<Figure>,
    pub outdir: PathBuf,
    pub grid: TimeGrid,
}

impl FiguresConfig {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let which = match s.which()? {
            Some(list) if !list.is_empty() => list.iter().map(|f| f.parse()).collect::<CliResult<Vec<_>>>()?,
            _ => Figure::ALL.to_vec(),
        };
        Ok(Self {
            which,
            outdir: s.out()?.unwrap_or_else(|| PathBuf::from("figures")),
            grid: TimeGrid::from_settings(s)?,
        })
    }
}

/// Writes `<fig>.csv` and `<fig>.svg` for each requested figure.
pub fn reproduce_figures(cfg: &FiguresConfig) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.outdir).map_err(|e| CliError::io(format!("creating {}", cfg.outdir.display()), e))?;
    let mut written = Vec::new();
    for &fig in &cfg.which {
        let rows = figure_rows(fig, cfg.grid)?;
        let csv = cfg.outdir.join(format!("{}.csv", fig.name()));
        let svg = cfg.outdir.join(format!("{}.svg", fig.name()));
        write_file(&csv, figure_table(fig, &rows).to_csv_string())?;
        write_file(&svg, figure_svg(fig, &rows))?;
        written.push(csv);
        written.push(svg);
    }
    Ok(written)
}

fn write_file(path: &Path, contents: String) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps() {
        let grid = TimeGrid::new(5.0, 11).unwrap();
        let rows = figure_rows(Figure::Fig2, grid).unwrap();
        assert_eq!(rows.len(), 33);
        assert!(rows.iter().all(|r| r.n == 2));
        assert_eq!(curves(&rows, Measure::Negativity).len(), 3);
        let rows = figure_rows(Figure::Fig5, grid).unwrap();
        assert_eq!(curves(&rows, Measure::DiscordLb).len(), 5);
        assert!(rows.iter().all(|r| r.a2 == 1.0 && r.a3 == 1.0));
        let t = figure_table(Figure::Fig5, &rows);
        assert_eq!(t.header, ["t", "n", "a2", "a3", "discord_lb"]);
    }

    #[test]
    fn names_roundtrip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig1".parse::<Figure>().is_err());
    }
}
