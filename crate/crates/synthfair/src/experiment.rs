//! Declarative experiment files and their outputs.
//!
//! ```toml
//! data = "biased.csv"          # relative to this file
//! schema = "biased.schema.toml"
//! n_runs = 10                  # seeds default to 0..n_runs
//! test_fraction = 0.3
//! arms = [
//!   { kind = "baseline" },
//!   { kind = "oversample", strategy = "expand-unprivileged-favored" },
//!   { kind = "reweigh" },
//!   { kind = "reject-option" },
//! ]
//!
//! [classifier]
//! kind = "logreg"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use synthfair_core::harness::{run_experiment, Arm, ExperimentSummary, ProtocolConfig};
use synthfair_core::oversample::Strategy;
use synthfair_core::tabular::Encoding;

use crate::error::{AppError, AppResult};
use crate::io;

pub const DEFAULT_RUNS: usize = 10;

pub fn default_arms() -> Vec<Arm> {
    vec![
        Arm::Baseline,
        Arm::Oversample {
            strategy: Strategy::ExpandUnprivilegedFavored,
        },
        Arm::Reweigh,
        Arm::RejectOption,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data: PathBuf,
    pub schema: PathBuf,
    #[serde(default)]
    pub n_runs: Option<usize>,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default = "default_arms")]
    pub arms: Vec<Arm>,
    #[serde(flatten)]
    pub protocol: ProtocolConfig,
}

impl ExperimentConfig {
    /// Reads a config file; relative data and schema paths are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> AppResult<Self> {
        let mut cfg: ExperimentConfig = io::read_toml(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.data = base.join(&cfg.data);
        cfg.schema = base.join(&cfg.schema);
        cfg.seeds()?;
        cfg.protocol.validate()?;
        if cfg.arms.is_empty() {
            return Err(AppError::config(path, "arms must not be empty"));
        }
        Ok(cfg)
    }

    pub fn seeds(&self) -> AppResult<Vec<u64>> {
        let seeds = match (&self.seeds, self.n_runs) {
            (Some(s), Some(n)) if s.len() != n => {
                return Err(AppError::Usage(format!(
                    "n_runs is {n} but {} seeds are listed",
                    s.len()
                )))
            }
            (Some(s), _) => s.clone(),
            (None, n) => (0..n.unwrap_or(DEFAULT_RUNS) as u64).collect(),
        };
        if seeds.is_empty() {
            return Err(AppError::Usage("n_runs must be at least 1".into()));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(AppError::Usage("seeds must be distinct".into()));
        }
        Ok(seeds)
    }
}

/// The summary document: the resolved configuration and the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub summary: ExperimentSummary,
}

pub fn run(cfg: &ExperimentConfig) -> AppResult<ExperimentReport> {
    let seeds = cfg.seeds()?;
    let schema = io::read_schema(&cfg.schema)?;
    let table = io::read_table(&cfg.data)?;
    let encoding = Encoding::fit(&schema, &table)?;
    // Each run fits its own scaler on its training part.
    let data = encoding.encode(&table)?;
    let summary = run_experiment(&data, &cfg.protocol, &cfg.arms, &seeds)?;
    Ok(ExperimentReport {
        config: cfg.clone(),
        seeds,
        summary,
    })
}

/// Writes `summary.json` and one `sweep-<arm>.csv` per arm into `dir`.
pub fn write_outputs(report: &ExperimentReport, dir: &Path) -> AppResult<Vec<PathBuf>> {
    let mut written = vec![dir.join("summary.json")];
    io::write_json(&written[0], report)?;
    for arm in &report.summary.arms {
        let path = dir.join(format!("sweep-{}.csv", arm.name));
        io::write_sweep_csv(&path, &arm.sweep)?;
        written.push(path);
    }
    Ok(written)
}
