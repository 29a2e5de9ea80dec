//! Command-line surface and config-file merging.
//!
//! Every long flag can also be set in a plain `key=value` config file
//! passed with `--config`; explicit flags win over the file, which wins
//! over built-in defaults.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use spcart::truncation::Truncation;
use spcart::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "spcart",
    about = "Sparse PCA by rotation and truncation: fits, method comparisons, bound verification, synthetic data",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit one method on one dataset and write loadings plus metrics.
    Fit(FitArgs),
    /// Run several methods over a lambda sweep and write one table row
    /// per (method, lambda).
    Compare(CompareArgs),
    /// Fit once, then compare every applicable theoretical bound with the
    /// empirical outcome.
    Bounds(FitArgs),
    /// Write the synthetic covariance and/or sampled data.
    Synth(SynthArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Input: a CSV path or a builtin dataset id (pitprops, synthetic).
    #[arg(long)]
    pub input: Option<String>,

    /// How to interpret a CSV input: data (samples x variables) or
    /// covariance (square).
    #[arg(long, value_name = "data|covariance")]
    pub input_kind: Option<String>,

    /// Skip column centering of CSV data input (for pre-centered or
    /// covariance-factor matrices).
    #[arg(long)]
    pub no_center: bool,

    /// Subtract each row's mean first (patch-style preprocessing).
    #[arg(long)]
    pub remove_dc: bool,

    /// Output path stem; files are written as `<stem>.<kind>.<ext>`.
    /// Defaults to `$SPCART_OUT_DIR/<command>` or `./<command>`.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,

    /// Report format: csv (6 significant digits) or json-lines (full
    /// precision).
    #[arg(long, value_name = "csv|json-lines")]
    pub format: Option<String>,

    /// Seed for anything randomized (sampling, restarts).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Plain key=value file supplying defaults for any long flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Method: spcart, rsvd-gp, rsvd-gpb, st, pca.
    #[arg(long)]
    pub method: Option<String>,

    /// Truncation type: l0, l1, sp, en.
    #[arg(long)]
    pub trunc: Option<String>,

    /// Truncation parameter; l0/l1 accept the token 1/sqrt(p).
    #[arg(long)]
    pub lambda: Option<String>,

    /// Number of loadings.
    #[arg(long, short = 'r')]
    pub r: Option<usize>,

    /// Adaptive thresholds for the power solvers (true/false).
    #[arg(long)]
    pub adaptive: Option<bool>,

    /// Deflation start: eigenvector (warm start) or column (dominant
    /// variable).
    #[arg(long, value_name = "eigenvector|column")]
    pub power_init: Option<String>,

    #[arg(long)]
    pub max_iterations: Option<usize>,

    /// Relative-change convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Comma-separated method list.
    #[arg(long)]
    pub methods: Option<String>,

    #[arg(long)]
    pub trunc: Option<String>,

    /// Comma-separated lambda sweep; each entry may be 1/sqrt(p).
    #[arg(long)]
    pub lambdas: Option<String>,

    #[arg(long, short = 'r')]
    pub r: Option<usize>,

    #[arg(long)]
    pub adaptive: Option<bool>,

    #[arg(long, value_name = "eigenvector|column")]
    pub power_init: Option<String>,

    #[arg(long)]
    pub max_iterations: Option<usize>,

    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SynthArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Also write n sampled rows.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Write the analytic covariance (default when --samples is absent).
    #[arg(long)]
    pub cov: bool,
}

/// Values read from a `key=value` config file.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    map: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidInput(format!("--config: cannot read {}: {e}", path.display()))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(Error::InvalidArgument(format!(
                        "--config: line {} is not key=value: {line:?}",
                        lineno + 1
                    )));
                };
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(FileConfig { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidArgument(format!("--config: bad value for {key}: {raw:?}"))
            }),
        }
    }

    pub fn get_flag(&self, key: &str) -> Result<bool> {
        Ok(self.get_parsed::<bool>(key)?.unwrap_or(false))
    }
}

/// Parses a lambda token into a truncation spec, resolving `1/sqrt(p)`
/// once the variable count is known.
pub fn parse_truncation(trunc: &str, lambda: &str, p: usize) -> Result<Truncation> {
    let spec = match trunc {
        "l0" => Truncation::Hard {
            lambda: parse_threshold(lambda, p)?,
        },
        "l1" => Truncation::Soft {
            lambda: parse_threshold(lambda, p)?,
        },
        "sp" => {
            let zeros: usize = lambda.parse().map_err(|_| {
                Error::InvalidArgument(format!(
                    "--lambda: sp truncation needs an integer count of zeros in 0..={}, got {lambda:?}",
                    p.saturating_sub(1)
                ))
            })?;
            Truncation::BySparsity { zeros }
        }
        "en" => {
            let share: f64 = lambda.parse().map_err(|_| {
                Error::InvalidArgument(format!(
                    "--lambda: en truncation needs a number in [0,1), got {lambda:?}"
                ))
            })?;
            Truncation::ByEnergy { share }
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "--trunc: expected one of l0|l1|sp|en, got {other:?}"
            )))
        }
    };
    spec.validate(p).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::InvalidArgument(format!("--lambda: {msg}")),
        other => other,
    })?;
    Ok(spec)
}

fn parse_threshold(lambda: &str, p: usize) -> Result<f64> {
    let compact: String = lambda.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "1/sqrt(p)" {
        return Ok(1.0 / (p as f64).sqrt());
    }
    lambda.parse::<f64>().map_err(|_| {
        Error::InvalidArgument(format!(
            "--lambda: expected a number in [0,1) or the token 1/sqrt(p), got {lambda:?}"
        ))
    })
}
