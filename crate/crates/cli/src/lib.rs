//! Command-line front end for `qutrit-dfs`.
//!
//! Subcommands: `evolve`, `scan`, `reproduce-figures` and `validate`. Exit
//! codes are 0 on success, 1 when validation checks fail, 2 for usage or
//! configuration errors and 3 when a numerical invariant is violated.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};

pub mod claims;
pub mod error;
pub mod evolve;
pub mod figures;
pub mod format;
pub mod scan;
pub mod settings;
pub mod svg;
pub mod validate;

pub use error::{CliError, CliResult};
use format::Table;
use settings::{Flags, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "qutrit-dfs",
    version,
    about = "Collective qutrit decay: DFS dynamics, negativity and discord"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Time series of DFS coefficients, or full-register diagnostics with --method oracle.
    Evolve(Flags),
    /// Pair negativity and discord over n and time.
    Scan(Flags),
    /// CSV and SVG data for the negativity and discord figures.
    ReproduceFigures(Flags),
    /// Run the invariant suite and print a JSON report.
    Validate(Flags),
}

fn write_output(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| CliError::io(format!("writing {}", p.display()), e)),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io("writing stdout", e)),
    }
}

fn emit_table(table: &Table, s: &Settings) -> CliResult<()> {
    write_output(s.out()?.as_deref(), &table.to_csv_string())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Evolve(flags) => {
            let s = Settings::load(flags)?;
            let cfg = evolve::EvolveConfig::from_settings(&s)?;
            let emit_svg = s.emit_svg()?;
            let out = s.out()?;
            if emit_svg && out.is_none() {
                return Err(CliError::Usage("--emit-svg needs --out".into()));
            }
            let table = evolve::run_evolve(&cfg)?;
            emit_table(&table, &s)?;
            if let (true, Some(out)) = (emit_svg, out) {
                let series: Vec<svg::Series> = table.header[1..]
                    .iter()
                    .map(|name| svg::Series {
                        label: name.clone(),
                        points: table
                            .rows
                            .iter()
                            .map(|r| r[0])
                            .zip(table.column(name).unwrap())
                            .collect(),
                    })
                    .collect();
                let plot = svg::line_plot("evolve", "t", "value", &series);
                write_output(Some(&out.with_extension("svg")), &plot)?;
            }
            Ok(())
        }
        Command::Scan(flags) => {
            let s = Settings::load(flags)?;
            let cfg = scan::ScanConfig::from_settings(&s)?;
            let rows = scan::run_scan(&cfg)?;
            write_output(
                cfg.output_path.as_deref(),
                &scan::scan_table(&cfg, &rows).to_csv_string(),
            )?;
            if let (true, Some(out)) = (cfg.emit_svg, &cfg.output_path) {
                scan::write_svgs(&cfg, &rows, out)?;
            }
            Ok(())
        }
        Command::ReproduceFigures(flags) => {
            let s = Settings::load(flags)?;
            let cfg = figures::FiguresConfig::from_settings(&s)?;
            for path in figures::reproduce_figures(&cfg)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Validate(flags) => {
            let s = Settings::load(flags)?;
            let cfg = validate::ValidateConfig::from_settings(&s)?;
            let report = validate::run_validate(&cfg)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(s.out()?.as_deref(), &(json + "\n"))?;
            for c in &report.checks {
                eprintln!(
                    "{} {} (observed {:.3e}, tolerance {:.1e})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.check,
                    c.observed,
                    c.tolerance
                );
            }
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Validation(report.failures()))
            }
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
