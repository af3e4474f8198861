//! Seeded experiment arms, threshold sweeps and cross-arm summaries.
//!
//! One run is one (arm, seed) pair: stratified split, min-max scaling fit
//! on the training part, the arm's mitigation, training, a threshold sweep
//! on the test part and the balanced-accuracy operating point. Every arm
//! splits with the run seed, so runs sharing a seed share a partition and
//! can be compared with paired tests.

mod run;
mod summary;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use run::{run_arm, RunOutput, ThresholdReport};
pub use summary::{summarize, ArmSummary, ExperimentSummary, Metric, MetricSummary, SweepRow, TTestEntry};

use crate::error::{Error, Result};
use crate::models::Classifier;
use crate::oversample::{Strategy, DEFAULT_K_NEIGHBORS};
use crate::tabular::Dataset;

/// The treatment applied in one arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Arm {
    Baseline,
    Oversample { strategy: Strategy },
    Reweigh,
    RejectOption,
}

impl Arm {
    pub fn name(&self) -> String {
        match self {
            Arm::Baseline => "baseline".into(),
            Arm::Oversample { strategy } => alloc::format!("oversample-{strategy}"),
            Arm::Reweigh => "reweigh".into(),
            Arm::RejectOption => "reject-option".into(),
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `0.00, 0.01, ..., 0.50`.
pub fn default_thresholds() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 100.0).collect()
}

pub fn default_reject_margins() -> Vec<f64> {
    alloc::vec![0.05, 0.1, 0.15, 0.2]
}

/// Everything about a run except the data, the arm and the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProtocolConfig {
    pub test_fraction: f64,
    pub thresholds: Vec<f64>,
    pub classifier: Classifier,
    pub k_neighbors: usize,
    /// Confidence parameter of the divergence bound.
    pub delta: f64,
    /// Candidate reject-option margins.
    pub reject_margins: Vec<f64>,
    /// Largest drop in operating balanced accuracy, relative to the plain
    /// model, accepted when picking a reject-option margin.
    pub accuracy_budget: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            test_fraction: 0.3,
            thresholds: default_thresholds(),
            classifier: Classifier::default(),
            k_neighbors: DEFAULT_K_NEIGHBORS,
            delta: 0.05,
            reject_margins: default_reject_margins(),
            accuracy_budget: 0.03,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::argument("test_fraction must lie in (0, 1)"));
        }
        if self.thresholds.is_empty() {
            return Err(Error::argument("threshold grid is empty"));
        }
        if self.thresholds.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::argument("thresholds must lie in [0, 1]"));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::argument("thresholds must be strictly increasing"));
        }
        if self.k_neighbors == 0 {
            return Err(Error::argument("k_neighbors must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::argument("delta must lie in (0, 1)"));
        }
        if self.reject_margins.is_empty() || self.reject_margins.iter().any(|m| !(*m > 0.0 && *m <= 0.5)) {
            return Err(Error::argument("reject margins must be nonempty and lie in (0, 0.5]"));
        }
        if self.accuracy_budget.is_nan() || self.accuracy_budget < 0.0 {
            return Err(Error::argument("accuracy_budget must be nonnegative"));
        }
        match self.classifier {
            Classifier::Logreg(p) => p.validate(),
            Classifier::Forest(p) => p.validate(),
        }
    }
}

/// Runs every (arm, seed) pair and summarizes. With the `parallel` feature
/// runs execute concurrently; the summary does not depend on completion
/// order.
pub fn run_experiment(
    data: &Dataset,
    protocol: &ProtocolConfig,
    arms: &[Arm],
    seeds: &[u64],
) -> Result<ExperimentSummary> {
    protocol.validate()?;
    if arms.is_empty() || seeds.is_empty() {
        return Err(Error::argument("an experiment needs at least one arm and one seed"));
    }
    let jobs: Vec<(Arm, u64)> = arms.iter().flat_map(|&a| seeds.iter().map(move |&s| (a, s))).collect();

    #[cfg(feature = "parallel")]
    let runs: Result<Vec<RunOutput>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(|&(a, s)| run_arm(data, protocol, a, s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Result<Vec<RunOutput>> = jobs.iter().map(|&(a, s)| run_arm(data, protocol, a, s)).collect();

    summarize(arms, runs?)
}
