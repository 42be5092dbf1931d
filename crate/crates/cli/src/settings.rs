//! Command-line flags merged over an optional `key=value` config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

use crate::error::{CliError, CliResult};

/// Flags shared by every subcommand. Each one may also be given in the
/// config file under the same name (`t-max` or `t_max`); flags win.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Config file of `key=value` lines; `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of qutrits; `scan` accepts a comma-separated list.
    #[arg(long)]
    pub n: Option<String>,
    /// Decay weight of level 1.
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Decay weight of level 2.
    #[arg(long, allow_negative_numbers = true)]
    pub a3: Option<f64>,
    /// End of the time grid (default 5).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points on [0, t-max], endpoints included.
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// closed-form, ode or oracle.
    #[arg(long)]
    pub method: Option<String>,
    /// Comma-separated subset of negativity, discord_lb, discord_oracle.
    #[arg(long)]
    pub measures: Option<String>,
    /// Seed for random states and oracle restarts.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file, or output directory for `reproduce-figures`.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write SVG plots next to the CSV.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub emit_svg: Option<bool>,
    /// Comma-separated check groups to skip in `validate`.
    #[arg(long)]
    pub skip: Option<String>,
    /// Integrator step for the ode and oracle methods.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Nelder-Mead restarts for the discord oracle.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Figures to build: comma-separated subset of fig2, fig3, fig4, fig5.
    #[arg(long)]
    pub which: Option<String>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

const KEYS: &[&str] = &[
    "n",
    "a2",
    "a3",
    "t_max",
    "t_steps",
    "method",
    "measures",
    "seed",
    "out",
    "emit_svg",
    "skip",
    "dt",
    "restarts",
    "which",
    "inject_fault",
];

#[derive(Debug, Clone, Default)]
pub struct Settings {
    flags: Flags,
    file: BTreeMap<String, (usize, String)>,
    path: Option<PathBuf>,
}

pub fn parse_config(text: &str, path: &Path) -> CliResult<BTreeMap<String, (usize, String)>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CliError::ConfigFile {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
        let key = k.trim().trim_start_matches("--").replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(err(format!("unknown key {:?}", k.trim())));
        }
        if map.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
            return Err(err(format!("duplicate key {key:?}")));
        }
    }
    Ok(map)
}

impl Settings {
    pub fn load(flags: Flags) -> CliResult<Self> {
        let (file, path) = match &flags.config {
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))?;
                (parse_config(&text, p)?, Some(p.clone()))
            }
            None => (BTreeMap::new(), None),
        };
        Ok(Self { flags, file, path })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        let Some((line, raw)) = self.file.get(key) else {
            return Ok(None);
        };
        raw.parse().map(Some).map_err(|e| CliError::ConfigFile {
            path: self.path.clone().unwrap_or_default(),
            line: *line,
            message: format!("bad value {raw:?} for {key}: {e}"),
        })
    }

    fn pick<T: FromStr + Clone>(&self, key: &str, flag: &Option<T>) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v.clone())),
            None => self.file_value(key),
        }
    }

    pub fn n_values(&self) -> CliResult<Option<Vec<usize>>> {
        let Some(raw) = self.pick("n", &self.flags.n)? else {
            return Ok(None);
        };
        let list = split_list(&raw)
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| CliError::Usage(format!("bad n value {s:?}: {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        if list.is_empty() {
            return Err(CliError::Usage("n list is empty".into()));
        }
        Ok(Some(list))
    }

    pub fn a2(&self) -> CliResult<Option<f64>> {
        self.pick("a2", &self.flags.a2)
    }

    pub fn a3(&self) -> CliResult<Option<f64>> {
        self.pick("a3", &self.flags.a3)
    }

    pub fn t_max(&self) -> CliResult<Option<f64>> {
        self.pick("t_max", &self.flags.t_max)
    }

    pub fn t_steps(&self) -> CliResult<Option<usize>> {
        self.pick("t_steps", &self.flags.t_steps)
    }

    pub fn method(&self) -> CliResult<Option<String>> {
        self.pick("method", &self.flags.method)
    }

    pub fn measures(&self) -> CliResult<Option<Vec<String>>> {
        Ok(self
            .pick("measures", &self.flags.measures)?
            .map(|s| split_list(&s).map(String::from).collect()))
    }

    pub fn seed(&self) -> CliResult<Option<u64>> {
        self.pick("seed", &self.flags.seed)
    }

    pub fn out(&self) -> CliResult<Option<PathBuf>> {
        self.pick("out", &self.flags.out)
    }

    pub fn emit_svg(&self) -> CliResult<bool> {
        Ok(self.pick("emit_svg", &self.flags.emit_svg)?.unwrap_or(false))
    }

    pub fn skip(&self) -> CliResult<Vec<String>> {
        Ok(self
            .pick("skip", &self.flags.skip)?
            .map(|s| split_list(&s).map(String::from).collect())
            .unwrap_or_default())
    }

    pub fn dt(&self) -> CliResult<Option<f64>> {
        self.pick("dt", &self.flags.dt)
    }

    pub fn restarts(&self) -> CliResult<Option<usize>> {
        self.pick("restarts", &self.flags.restarts)
    }

    pub fn which(&self) -> CliResult<Option<Vec<String>>> {
        Ok(self
            .pick("which", &self.flags.which)?
            .map(|s| split_list(&s).map(String::from).collect()))
    }

    pub fn inject_fault(&self) -> CliResult<Option<String>> {
        self.pick("inject_fault", &self.flags.inject_fault)
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Time axis shared by every command: `t_max` and `t_steps` must define at
/// least two points on a positive interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub t_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, t_steps: usize) -> CliResult<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "t-max must be positive and finite, got {t_max}"
            )));
        }
        if t_steps < 2 {
            return Err(CliError::Usage(format!("t-steps must be at least 2, got {t_steps}")));
        }
        Ok(Self { t_max, t_steps })
    }

    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        Self::new(s.t_max()?.unwrap_or(5.0), s.t_steps()?.unwrap_or(501))
    }

    pub fn times(&self) -> Vec<f64> {
        let last = (self.t_steps - 1) as f64;
        (0..self.t_steps).map(|i| self.t_max * i as f64 / last).collect()
    }
}
