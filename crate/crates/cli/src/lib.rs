//! Command-line experiments for environment-assisted capacities of two-qubit unitaries.
//!
//! Each experiment produces one table, written as CSV with a `#` metadata header or as
//! JSON lines. `locate` finds the zero crossing of the `a1` or `eh_swap` curve.

pub mod config;
pub mod error;
pub mod experiments;
pub mod locate;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;

pub use config::{Experiment, ExperimentConfig, PartialConfig};
pub use error::{CliError, CliResult};
pub use experiments::run_experiment;
pub use locate::locate;
pub use output::{Cell, Format, Table};

#[derive(Debug, Clone, Parser)]
#[command(name = "envcap", version, about)]
pub struct Args {
    /// Experiment (a1, a2, a3, b1, b2, eh_swap, region_scan, classify, qhtens, jammer) or `locate`.
    pub command: Option<String>,
    /// Curve for `locate`: a1 or eh_swap.
    pub target: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated reals; angles in units of π.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    pub bracket: Option<Vec<f64>>,
    /// Leave the timestamp out of the CSV header so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// JSON file with experiment, grid, tol, seed, params and output_path; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Args {
    fn flag_config(&self, experiment: Option<String>) -> CliResult<PartialConfig> {
        Ok(PartialConfig {
            experiment,
            grid: self.grid,
            tol: self.tol,
            seed: self.seed,
            params: self
                .params
                .as_deref()
                .map(config::parse_params)
                .transpose()?,
            output_path: self.out.clone(),
        })
    }

    fn resolve(&self, experiment: Option<String>) -> CliResult<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        base.merge(self.flag_config(experiment)?).resolve()
    }
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_target(path: &Option<PathBuf>) -> PathBuf {
    path.clone().unwrap_or_else(|| PathBuf::from("<stdout>"))
}

pub fn run(args: &Args) -> CliResult<()> {
    if args.command.as_deref() == Some("locate") {
        let target = args
            .target
            .clone()
            .ok_or_else(|| CliError::Config("locate needs a curve: a1 or eh_swap".into()))?;
        let cfg = args.resolve(Some(target))?;
        if !cfg.experiment.locatable() {
            return Err(CliError::Config(format!(
                "locate works on a1 or eh_swap, not {}",
                cfg.experiment
            )));
        }
        let bracket = args.bracket.as_ref().map(|b| (b[0], b[1]));
        let root = locate(&cfg, bracket)?;
        let mut out = open_output(&cfg.output_path)?;
        writeln!(out, "{root:.6}")
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(io_target(&cfg.output_path), e))?;
        return Ok(());
    }
    if let Some(extra) = &args.target {
        return Err(CliError::Config(format!("unexpected argument `{extra}`")));
    }
    if args.bracket.is_some() {
        return Err(CliError::Config("--bracket only applies to locate".into()));
    }
    let cfg = args.resolve(args.command.clone())?;
    let mut out = open_output(&cfg.output_path)?;
    let table = run_experiment(&cfg)?;
    let timestamp = (!args.no_timestamp)
        .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    match args.format {
        Format::Csv => output::write_csv(&mut out, &table, &cfg, timestamp.as_deref()),
        Format::Json => output::write_json(&mut out, &table),
    }
    .and_then(|_| out.flush())
    .map_err(|e| CliError::io(io_target(&cfg.output_path), e))
}
