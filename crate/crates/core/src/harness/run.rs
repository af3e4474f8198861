use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Arm, ProtocolConfig};
use crate::divergence::{dataset_bounds, DivergenceReport};
use crate::error::{Error, Result};
use crate::fairmetrics::{balanced_accuracy_threshold, evaluate, threshold_sweep, FairnessReport};
use crate::mitigators::{reject_option, reweigh, RejectOptionParams};
use crate::oversample::{apply_plan, OversamplePlan};
use crate::tabular::{split, Dataset, MinMaxScaler};

type Sweep = Vec<(f64, FairnessReport)>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub threshold: f64,
    #[serde(flatten)]
    pub report: FairnessReport,
}

/// Result of one (arm, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub arm: Arm,
    pub seed: u64,
    /// See [`crate::tabular::Split::fingerprint`].
    pub split_fingerprint: u64,
    pub n_train: usize,
    pub n_synthetic: usize,
    pub sweep: Vec<ThresholdReport>,
    pub operating_threshold: f64,
    pub operating: FairnessReport,
    /// Margin picked for the reject-option arm.
    pub reject_margin: Option<f64>,
    /// Divergence between the groups' training features after mitigation.
    pub divergence: DivergenceReport,
}

/// One run of `arm` on `data` (encoded, unscaled) with `seed`. Errors are
/// wrapped in [`Error::Arm`].
pub fn run_arm(data: &Dataset, protocol: &ProtocolConfig, arm: Arm, seed: u64) -> Result<RunOutput> {
    run_inner(data, protocol, arm, seed).map_err(|e| Error::Arm {
        arm: arm.name(),
        seed,
        source: Box::new(e),
    })
}

fn run_inner(data: &Dataset, protocol: &ProtocolConfig, arm: Arm, seed: u64) -> Result<RunOutput> {
    protocol.validate()?;
    let parts = split(data, protocol.test_fraction, seed)?;
    let fingerprint = parts.fingerprint();
    let scaler = MinMaxScaler::fit(&parts.train);
    let train = scaler.transform(parts.train)?;
    let test = scaler.transform(parts.test)?;

    let (train, n_synthetic) = match arm {
        Arm::Oversample { strategy } => {
            let plan = OversamplePlan::for_dataset(&train, strategy, protocol.k_neighbors, seed)?;
            (apply_plan(&train, &plan)?, plan.total_synthetic())
        }
        Arm::Reweigh => (reweigh(train)?, 0),
        Arm::Baseline | Arm::RejectOption => (train, 0),
    };

    let model = protocol.classifier.train(&train, seed)?;
    let scores = model.scores(test.features());
    let (y, g) = (test.labels(), test.groups());

    let plain = threshold_sweep(&scores, y, g, &protocol.thresholds)?;
    let (sweep, reject_margin) = match arm {
        Arm::RejectOption => {
            let (margin, sweep) = pick_margin(&scores, y, g, protocol, &plain)?;
            (sweep, Some(margin))
        }
        _ => (plain, None),
    };
    let (operating_threshold, operating) = operating_point(&sweep)?;
    let divergence = dataset_bounds(&train, protocol.delta, seed)?;

    Ok(RunOutput {
        arm,
        seed,
        split_fingerprint: fingerprint,
        n_train: train.n_rows(),
        n_synthetic,
        sweep: sweep
            .into_iter()
            .map(|(threshold, report)| ThresholdReport { threshold, report })
            .collect(),
        operating_threshold,
        operating,
        reject_margin,
        divergence,
    })
}

fn operating_point(sweep: &[(f64, FairnessReport)]) -> Result<(f64, FairnessReport)> {
    let t = balanced_accuracy_threshold(sweep)
        .ok_or_else(|| Error::argument("balanced accuracy is undefined at every threshold"))?;
    let report = sweep.iter().find(|(u, _)| *u == t).map(|(_, r)| *r).unwrap();
    Ok((t, report))
}

fn reject_sweep(
    scores: &[f64],
    y: &[bool],
    g: &[bool],
    grid: &[f64],
    margin: f64,
) -> Result<Vec<(f64, FairnessReport)>> {
    grid.iter()
        .map(|&t| {
            let pred = reject_option(scores, g, &RejectOptionParams::new(margin, t)?)?;
            Ok((t, evaluate(y, &pred, g)?))
        })
        .collect()
}

/// Among margins whose operating balanced accuracy is within the budget of
/// the plain model's, the one with the lowest operating di; ties and the
/// no-candidate case go to the smallest margin.
fn pick_margin(
    scores: &[f64],
    y: &[bool],
    g: &[bool],
    protocol: &ProtocolConfig,
    plain: &[(f64, FairnessReport)],
) -> Result<(f64, Vec<(f64, FairnessReport)>)> {
    let (_, plain_op) = operating_point(plain)?;
    let floor = plain_op.balanced_accuracy.unwrap() - protocol.accuracy_budget;

    let mut margins = protocol.reject_margins.clone();
    margins.sort_by(f64::total_cmp);
    let mut fallback = None;
    let mut best: Option<(f64, f64, Sweep)> = None;
    for m in margins {
        let sweep = reject_sweep(scores, y, g, &protocol.thresholds, m)?;
        let Ok((_, op)) = operating_point(&sweep) else {
            continue;
        };
        let di = op.di_measure.unwrap_or(f64::INFINITY);
        if op.balanced_accuracy.unwrap() >= floor && best.as_ref().is_none_or(|(_, b, _)| di < *b) {
            best = Some((m, di, sweep));
        } else if fallback.is_none() {
            fallback = Some((m, sweep));
        }
    }
    match (best, fallback) {
        (Some((m, _, s)), _) => Ok((m, s)),
        (None, Some(f)) => Ok(f),
        (None, None) => Err(Error::argument(
            "no reject-option margin yields a defined operating point",
        )),
    }
}
