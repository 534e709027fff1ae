//! Experiment configuration: an optional JSON file overridden by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use envcap_core::capacity::OptimizerOptions;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    A1,
    A2,
    A3,
    B1,
    B2,
    EhSwap,
    RegionScan,
    Classify,
    Qhtens,
    Jammer,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::A1,
        Experiment::A2,
        Experiment::A3,
        Experiment::B1,
        Experiment::B2,
        Experiment::EhSwap,
        Experiment::RegionScan,
        Experiment::Classify,
        Experiment::Qhtens,
        Experiment::Jammer,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::A1 => "a1",
            Experiment::A2 => "a2",
            Experiment::A3 => "a3",
            Experiment::B1 => "b1",
            Experiment::B2 => "b2",
            Experiment::EhSwap => "eh_swap",
            Experiment::RegionScan => "region_scan",
            Experiment::Classify => "classify",
            Experiment::Qhtens => "qhtens",
            Experiment::Jammer => "jammer",
        }
    }

    /// Grid used when neither the config file nor the flags set one.
    pub fn default_grid(&self) -> usize {
        match self {
            Experiment::A1 => 101,
            Experiment::A2 | Experiment::A3 | Experiment::B1 | Experiment::B2 => 51,
            Experiment::EhSwap => 65,
            Experiment::RegionScan => 9,
            Experiment::Classify | Experiment::Qhtens | Experiment::Jammer => 64,
        }
    }

    /// Whether the experiment is a curve with a zero crossing that `locate` can find.
    pub fn locatable(&self) -> bool {
        matches!(self, Experiment::A1 | Experiment::EhSwap)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                CliError::Config(format!(
                    "unknown experiment `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub grid: usize,
    pub tol: f64,
    pub seed: u64,
    /// Experiment-specific values; angles are in units of π.
    pub params: Vec<f64>,
    pub output_path: Option<PathBuf>,
}

/// Every field optional, as read from a config file or collected from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub experiment: Option<String>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub params: Option<Vec<f64>>,
    pub output_path: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            experiment: over.experiment.or(self.experiment),
            grid: over.grid.or(self.grid),
            tol: over.tol.or(self.tol),
            seed: over.seed.or(self.seed),
            params: over.params.or(self.params),
            output_path: over.output_path.or(self.output_path),
        }
    }

    pub fn resolve(self) -> CliResult<ExperimentConfig> {
        let experiment: Experiment = self
            .experiment
            .ok_or_else(|| CliError::Config("no experiment given".into()))?
            .parse()?;
        let defaults = OptimizerOptions::default();
        let cfg = ExperimentConfig {
            experiment,
            grid: self.grid.unwrap_or_else(|| experiment.default_grid()),
            tol: self.tol.unwrap_or(defaults.tol),
            seed: self.seed.unwrap_or(defaults.seed),
            params: self.params.unwrap_or_default(),
            output_path: self.output_path,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        let defaults = OptimizerOptions::default();
        Self {
            experiment,
            grid: experiment.default_grid(),
            tol: defaults.tol,
            seed: defaults.seed,
            params: Vec::new(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.grid < 2 {
            return Err(CliError::Config(format!(
                "grid must be at least 2, got {}",
                self.grid
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(CliError::Config("params must be finite".into()));
        }
        Ok(())
    }

    pub fn optimizer(&self) -> OptimizerOptions {
        OptimizerOptions {
            grid: self.grid,
            tol: self.tol,
            seed: self.seed,
            ..OptimizerOptions::default()
        }
    }
}

/// Parses `a,b,c` into reals.
pub fn parse_params(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad number `{p}` in --params")))
        })
        .collect()
}
