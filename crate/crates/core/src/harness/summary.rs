use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Arm, RunOutput};
use crate::divergence::DivergenceReport;
use crate::error::{Error, Result};
use crate::fairmetrics::FairnessReport;
use crate::stats::{mean, paired_t_test, standard_error, TTest};

/// Operating-point quantities summarized per arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Accuracy,
    BalancedAccuracy,
    DiMeasure,
    DisparateImpact,
    StatisticalParityDifference,
    AverageOddsDifference,
    EqualOpportunityDifference,
    TheilIndex,
    OperatingThreshold,
    HDivergence,
    FavorableGapBound,
}

impl Metric {
    pub const ALL: [Metric; 11] = [
        Metric::Accuracy,
        Metric::BalancedAccuracy,
        Metric::DiMeasure,
        Metric::DisparateImpact,
        Metric::StatisticalParityDifference,
        Metric::AverageOddsDifference,
        Metric::EqualOpportunityDifference,
        Metric::TheilIndex,
        Metric::OperatingThreshold,
        Metric::HDivergence,
        Metric::FavorableGapBound,
    ];

    /// Metrics compared across arms with paired t-tests.
    pub const TESTED: [Metric; 7] = [
        Metric::Accuracy,
        Metric::BalancedAccuracy,
        Metric::DiMeasure,
        Metric::StatisticalParityDifference,
        Metric::AverageOddsDifference,
        Metric::EqualOpportunityDifference,
        Metric::TheilIndex,
    ];

    pub fn of(self, run: &RunOutput) -> Option<f64> {
        let r = &run.operating;
        match self {
            Metric::Accuracy => Some(r.accuracy),
            Metric::BalancedAccuracy => r.balanced_accuracy,
            Metric::DiMeasure => r.di_measure,
            Metric::DisparateImpact => r.disparate_impact,
            Metric::StatisticalParityDifference => r.statistical_parity_difference,
            Metric::AverageOddsDifference => r.average_odds_difference,
            Metric::EqualOpportunityDifference => r.equal_opportunity_difference,
            Metric::TheilIndex => r.theil_index,
            Metric::OperatingThreshold => Some(run.operating_threshold),
            Metric::HDivergence => Some(run.divergence.empirical_h_divergence),
            Metric::FavorableGapBound => Some(run.divergence.favorable_gap_bound),
        }
    }
}

/// Per-run values of one metric (ordered by seed) with mean and standard
/// error over the defined values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub values: Vec<Option<f64>>,
    pub n_defined: usize,
    pub mean: Option<f64>,
    pub standard_error: Option<f64>,
}

impl MetricSummary {
    pub fn from_values(metric: Metric, values: Vec<Option<f64>>) -> Self {
        let defined: Vec<f64> = values.iter().flatten().copied().collect();
        Self {
            metric,
            n_defined: defined.len(),
            mean: mean(&defined),
            standard_error: standard_error(&defined),
            values,
        }
    }
}

/// Sweep metrics at one threshold, averaged over the runs where defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub threshold: f64,
    pub accuracy: Option<f64>,
    pub balanced_accuracy: Option<f64>,
    pub di: Option<f64>,
    pub aod: Option<f64>,
    pub spd: Option<f64>,
    pub eod: Option<f64>,
    pub theil: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub arm: Arm,
    pub name: String,
    pub seeds: Vec<u64>,
    pub split_fingerprints: Vec<u64>,
    pub operating_thresholds: Vec<f64>,
    pub reject_margins: Vec<Option<f64>>,
    pub n_synthetic: Vec<usize>,
    pub divergence: Vec<DivergenceReport>,
    pub metrics: Vec<MetricSummary>,
    pub sweep: Vec<SweepRow>,
}

impl ArmSummary {
    pub fn metric(&self, metric: Metric) -> &MetricSummary {
        self.metrics.iter().find(|m| m.metric == metric).unwrap()
    }
}

/// Paired comparison of `arm_a` against `arm_b` on the seeds where both
/// values are defined. `test` is `None` when fewer than two pairs remain
/// or the differences have no variance; `note` says which.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestEntry {
    pub metric: Metric,
    pub arm_a: String,
    pub arm_b: String,
    pub n_pairs: usize,
    pub test: Option<TTest>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub n_runs: usize,
    pub arms: Vec<ArmSummary>,
    /// Empty with a single run per arm.
    pub t_tests: Vec<TTestEntry>,
}

impl ExperimentSummary {
    pub fn arm(&self, name: &str) -> Option<&ArmSummary> {
        self.arms.iter().find(|a| a.name == name)
    }
}

fn average(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    mean(&defined)
}

fn sweep_means(runs: &[&RunOutput]) -> Result<Vec<SweepRow>> {
    let grid: Vec<f64> = runs[0].sweep.iter().map(|r| r.threshold).collect();
    if runs
        .iter()
        .any(|r| r.sweep.len() != grid.len() || r.sweep.iter().zip(&grid).any(|(s, t)| s.threshold != *t))
    {
        return Err(Error::Pairing("runs of one arm used different threshold grids".into()));
    }
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &threshold)| {
            let col = |f: fn(&FairnessReport) -> Option<f64>| average(runs.iter().map(|r| f(&r.sweep[i].report)));
            SweepRow {
                threshold,
                accuracy: col(|r| Some(r.accuracy)),
                balanced_accuracy: col(|r| r.balanced_accuracy),
                di: col(|r| r.di_measure),
                aod: col(|r| r.average_odds_difference),
                spd: col(|r| r.statistical_parity_difference),
                eod: col(|r| r.equal_opportunity_difference),
                theil: col(|r| r.theil_index),
            }
        })
        .collect())
}

fn t_test_entry(metric: Metric, a: &ArmSummary, b: &ArmSummary) -> TTestEntry {
    let (xs, ys): (Vec<f64>, Vec<f64>) = a
        .metric(metric)
        .values
        .iter()
        .zip(&b.metric(metric).values)
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .unzip();
    let (test, note) = match paired_t_test(&xs, &ys) {
        Ok(t) => (Some(t), None),
        Err(Error::DegenerateVariance) => (None, Some("degenerate variance".into())),
        Err(_) => (None, Some("fewer than 2 defined pairs".into())),
    };
    TTestEntry {
        metric,
        arm_a: a.name.clone(),
        arm_b: b.name.clone(),
        n_pairs: xs.len(),
        test,
        note,
    }
}

/// Groups `runs` by arm (in the order of `arms`) and seed, checks that
/// every arm ran the same seeds on the same partitions, and computes
/// means, standard errors and the pairwise t-test table.
pub fn summarize(arms: &[Arm], runs: Vec<RunOutput>) -> Result<ExperimentSummary> {
    if arms.is_empty() {
        return Err(Error::argument("no arms to summarize"));
    }
    for (i, a) in arms.iter().enumerate() {
        if arms[..i].contains(a) {
            return Err(Error::argument(alloc::format!("arm `{a}` listed twice")));
        }
    }
    if let Some(r) = runs.iter().find(|r| !arms.contains(&r.arm)) {
        return Err(Error::Pairing(alloc::format!("run for unlisted arm `{}`", r.arm)));
    }

    let mut per_arm: Vec<Vec<&RunOutput>> = arms
        .iter()
        .map(|a| runs.iter().filter(|r| r.arm == *a).collect())
        .collect();
    for (arm, rs) in arms.iter().zip(per_arm.iter_mut()) {
        if rs.is_empty() {
            return Err(Error::Pairing(alloc::format!("arm `{arm}` has no runs")));
        }
        rs.sort_by_key(|r| r.seed);
        if rs.windows(2).any(|w| w[0].seed == w[1].seed) {
            return Err(Error::Pairing(alloc::format!("arm `{arm}` has a repeated seed")));
        }
    }
    let n_runs = per_arm[0].len();
    for (arm, rs) in arms.iter().zip(&per_arm) {
        if rs.len() != n_runs {
            return Err(Error::Pairing(alloc::format!(
                "arm `{arm}` has {} runs, arm `{}` has {n_runs}",
                rs.len(),
                arms[0]
            )));
        }
        for (r, r0) in rs.iter().zip(&per_arm[0]) {
            if r.seed != r0.seed {
                return Err(Error::Pairing(alloc::format!(
                    "arms `{arm}` and `{}` ran different seeds",
                    arms[0]
                )));
            }
            if r.split_fingerprint != r0.split_fingerprint {
                return Err(Error::Pairing(alloc::format!(
                    "seed {}: arms `{arm}` and `{}` used different splits",
                    r.seed,
                    arms[0]
                )));
            }
        }
    }

    let mut summaries = Vec::with_capacity(arms.len());
    for (&arm, rs) in arms.iter().zip(&per_arm) {
        summaries.push(ArmSummary {
            arm,
            name: arm.name(),
            seeds: rs.iter().map(|r| r.seed).collect(),
            split_fingerprints: rs.iter().map(|r| r.split_fingerprint).collect(),
            operating_thresholds: rs.iter().map(|r| r.operating_threshold).collect(),
            reject_margins: rs.iter().map(|r| r.reject_margin).collect(),
            n_synthetic: rs.iter().map(|r| r.n_synthetic).collect(),
            divergence: rs.iter().map(|r| r.divergence.clone()).collect(),
            metrics: Metric::ALL
                .iter()
                .map(|&m| MetricSummary::from_values(m, rs.iter().map(|r| m.of(r)).collect()))
                .collect(),
            sweep: sweep_means(rs)?,
        });
    }

    let mut t_tests = Vec::new();
    if n_runs >= 2 {
        for i in 0..summaries.len() {
            for j in i + 1..summaries.len() {
                for m in Metric::TESTED {
                    t_tests.push(t_test_entry(m, &summaries[i], &summaries[j]));
                }
            }
        }
    }
    Ok(ExperimentSummary {
        n_runs,
        arms: summaries,
        t_tests,
    })
}
