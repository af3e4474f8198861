//! Group confusion tables and the fairness metric battery.
//!
//! Rates with an empty denominator are `None` all the way through; a group
//! without positives never reads as perfectly fair.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn tpr(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn fpr(&self) -> Option<f64> {
        ratio(self.fp, self.fp + self.tn)
    }

    pub fn tnr(&self) -> Option<f64> {
        ratio(self.tn, self.fp + self.tn)
    }

    pub fn selection_rate(&self) -> Option<f64> {
        ratio(self.tp + self.fp, self.total())
    }

    fn add(&self, o: &Confusion) -> Confusion {
        Confusion {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfusion {
    pub privileged: Confusion,
    pub unprivileged: Confusion,
}

impl GroupConfusion {
    pub fn pooled(&self) -> Confusion {
        self.privileged.add(&self.unprivileged)
    }
}

fn check_lengths(y_true: &[bool], y_pred: &[bool], g: Option<&[bool]>) -> Result<()> {
    let n = y_true.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    for len in [Some(y_pred.len()), g.map(<[bool]>::len)].into_iter().flatten() {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    Ok(())
}

/// Tallies TP/FP/TN/FN per group (`g = true` is privileged).
pub fn confusion_by_group(y_true: &[bool], y_pred: &[bool], g: &[bool]) -> Result<GroupConfusion> {
    check_lengths(y_true, y_pred, Some(g))?;
    let mut gc = GroupConfusion::default();
    for ((&y, &p), &priv_) in y_true.iter().zip(y_pred).zip(g) {
        let c = if priv_ {
            &mut gc.privileged
        } else {
            &mut gc.unprivileged
        };
        match (y, p) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    Ok(gc)
}

/// Fairness and accuracy at one decision threshold. Differences are
/// unprivileged minus privileged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub statistical_parity_difference: Option<f64>,
    pub disparate_impact: Option<f64>,
    /// `1 - min(DI, 1/DI)`: 0 is parity, 1 is total disparity.
    pub di_measure: Option<f64>,
    pub average_odds_difference: Option<f64>,
    pub equal_opportunity_difference: Option<f64>,
    pub theil_index: Option<f64>,
    pub accuracy: f64,
    pub balanced_accuracy: Option<f64>,
}

/// Generalised entropy index (alpha = 1) of the benefits
/// `b = y_pred - y_true + 1`, with `0 ln 0 = 0`. `None` when every benefit
/// is zero.
pub fn theil_index(y_true: &[bool], y_pred: &[bool]) -> Result<Option<f64>> {
    check_lengths(y_true, y_pred, None)?;
    let n = y_true.len() as f64;
    let benefit = |(&y, &p): (&bool, &bool)| p as u8 as f64 - y as u8 as f64 + 1.0;
    let mu = y_true.iter().zip(y_pred).map(benefit).sum::<f64>() / n;
    if mu == 0.0 {
        return Ok(None);
    }
    let sum: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(benefit)
        .filter(|&b| b > 0.0)
        .map(|b| (b / mu) * libm::log(b / mu))
        .sum();
    // Rounding can leave a tiny negative sum when all benefits are equal.
    Ok(Some((sum / n).max(0.0)))
}

fn diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(a? - b?)
}

pub fn fairness_report(gc: &GroupConfusion, y_true: &[bool], y_pred: &[bool]) -> Result<FairnessReport> {
    check_lengths(y_true, y_pred, None)?;
    if gc.pooled().total() != y_true.len() {
        return Err(Error::DimensionMismatch {
            expected: gc.pooled().total(),
            found: y_true.len(),
        });
    }
    let (p, u) = (&gc.privileged, &gc.unprivileged);
    let (sel_p, sel_u) = (p.selection_rate(), u.selection_rate());
    let disparate_impact = match (sel_u, sel_p) {
        (Some(su), Some(sp)) if sp > 0.0 => Some(su / sp),
        _ => None,
    };
    let di_measure = disparate_impact.map(|di| if di == 0.0 { 1.0 } else { 1.0 - di.min(1.0 / di) });
    let eod = diff(u.tpr(), p.tpr());
    let aod = diff(u.fpr(), p.fpr()).zip(eod).map(|(f, t)| 0.5 * (f + t));
    let pooled = gc.pooled();
    let balanced_accuracy = pooled.tpr().zip(pooled.tnr()).map(|(a, b)| 0.5 * (a + b));
    Ok(FairnessReport {
        statistical_parity_difference: diff(sel_u, sel_p),
        disparate_impact,
        di_measure,
        average_odds_difference: aod,
        equal_opportunity_difference: eod,
        theil_index: theil_index(y_true, y_pred)?,
        accuracy: (pooled.tp + pooled.tn) as f64 / pooled.total() as f64,
        balanced_accuracy,
    })
}

/// Confusion table and report in one call.
pub fn evaluate(y_true: &[bool], y_pred: &[bool], g: &[bool]) -> Result<FairnessReport> {
    let gc = confusion_by_group(y_true, y_pred, g)?;
    fairness_report(&gc, y_true, y_pred)
}

/// Threshold with the highest balanced accuracy; ties go to the lower
/// threshold. Entries with undefined balanced accuracy are skipped.
pub fn balanced_accuracy_threshold(sweep: &[(f64, FairnessReport)]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for &(t, ref r) in sweep {
        let Some(ba) = r.balanced_accuracy else {
            continue;
        };
        best = match best {
            Some((bt, bba)) if bba > ba || (bba == ba && bt <= t) => Some((bt, bba)),
            _ => Some((t, ba)),
        };
    }
    best.map(|(t, _)| t)
}

/// Reports for each threshold of `grid` with labels `score >= t`.
pub fn threshold_sweep(
    scores: &[f64],
    y_true: &[bool],
    g: &[bool],
    grid: &[f64],
) -> Result<Vec<(f64, FairnessReport)>> {
    grid.iter()
        .map(|&t| {
            let pred = crate::models::threshold_labels(scores, t);
            Ok((t, evaluate(y_true, &pred, g)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn confusion_small() {
        let gc = confusion_by_group(&[true, false], &[true, false], &[true, false]).unwrap();
        assert_eq!(
            gc.privileged,
            Confusion {
                tp: 1,
                ..Default::default()
            }
        );
        assert_eq!(
            gc.unprivileged,
            Confusion {
                tn: 1,
                ..Default::default()
            }
        );
    }

    #[test]
    fn perfect_and_anti_predictors() {
        let y = [true, false, true, true, false, false];
        let g = [true, true, true, false, false, false];
        let gc = confusion_by_group(&y, &y, &g).unwrap();
        for c in [gc.privileged, gc.unprivileged] {
            assert_eq!((c.fp, c.fn_), (0, 0));
        }
        let anti: Vec<bool> = y.iter().map(|v| !v).collect();
        let gc = confusion_by_group(&y, &anti, &g).unwrap();
        for c in [gc.privileged, gc.unprivileged] {
            assert_eq!((c.tp, c.tn), (0, 0));
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            confusion_by_group(&[true], &[true, false], &[true]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn selection_rate_example() {
        // Privileged selects 3 of 4, unprivileged 2 of 4.
        let g = [true, true, true, true, false, false, false, false];
        let pred = [true, true, true, false, true, true, false, false];
        let y = [true; 8];
        let r = evaluate(&y, &pred, &g).unwrap();
        assert!((r.statistical_parity_difference.unwrap() + 0.25).abs() < 1e-15);
        assert!((r.disparate_impact.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.di_measure.unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_behavior_is_fair() {
        let g = [true, true, false, false];
        let y = [true, false, true, false];
        let p = [true, false, true, false];
        let r = evaluate(&y, &p, &g).unwrap();
        assert_eq!(r.statistical_parity_difference, Some(0.0));
        assert_eq!(r.disparate_impact, Some(1.0));
        assert_eq!(r.di_measure, Some(0.0));
        assert_eq!(r.average_odds_difference, Some(0.0));
        assert_eq!(r.equal_opportunity_difference, Some(0.0));
        assert_eq!(r.theil_index, Some(0.0));
    }

    #[test]
    fn average_odds_example() {
        // Privileged: TPR 1 (2/2), FPR 0.5 (1/2). Unprivileged: TPR 0.5, FPR 0.
        let g = [true, true, true, true, false, false, false, false];
        let y = [true, true, false, false, true, true, false, false];
        let p = [true, true, true, false, true, false, false, false];
        let r = evaluate(&y, &p, &g).unwrap();
        assert!((r.average_odds_difference.unwrap() + 0.5).abs() < 1e-15);
        assert!((r.equal_opportunity_difference.unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn theil_example() {
        // b = (2, 1), mu = 1.5: 0.5 * [(4/3) ln(4/3) + (2/3) ln(2/3)].
        let t = theil_index(&[false, false], &[true, false]).unwrap().unwrap();
        let expected = 0.5 * ((4.0 / 3.0) * libm::log(4.0 / 3.0) + (2.0 / 3.0) * libm::log(2.0 / 3.0));
        assert!((t - expected).abs() < 1e-15);
        assert!((t - 0.0566).abs() < 1e-3);
        assert_eq!(theil_index(&[true, false], &[true, false]).unwrap(), Some(0.0));
        assert_eq!(theil_index(&[true, true], &[false, false]).unwrap(), None);
    }

    #[test]
    fn undefined_rates_stay_undefined() {
        // Privileged group selects nobody: DI undefined, not 0.
        let r = evaluate(&[true, false], &[false, true], &[true, false]).unwrap();
        assert_eq!(r.disparate_impact, None);
        assert_eq!(r.di_measure, None);
        // Unprivileged has no positives: EOD undefined.
        let r = evaluate(&[true, false], &[true, false], &[true, false]).unwrap();
        assert_eq!(r.equal_opportunity_difference, None);
    }

    #[test]
    fn zero_di_means_full_disparity() {
        let r = evaluate(&[true, true], &[true, false], &[true, false]).unwrap();
        assert_eq!(r.disparate_impact, Some(0.0));
        assert_eq!(r.di_measure, Some(1.0));
    }

    #[test]
    fn constant_predictor_has_half_balanced_accuracy() {
        let y = [true, false, false, true, false];
        let g = [true, false, true, false, true];
        for c in [true, false] {
            let r = evaluate(&y, &[c; 5], &g).unwrap();
            assert_eq!(r.balanced_accuracy, Some(0.5));
        }
    }

    fn with_ba(ba: f64) -> FairnessReport {
        FairnessReport {
            statistical_parity_difference: None,
            disparate_impact: None,
            di_measure: None,
            average_odds_difference: None,
            equal_opportunity_difference: None,
            theil_index: None,
            accuracy: 0.0,
            balanced_accuracy: Some(ba),
        }
    }

    #[test]
    fn operating_point_tie_break() {
        assert_eq!(balanced_accuracy_threshold(&[(0.4, with_ba(0.1))]), Some(0.4));
        let sweep = vec![(0.1, with_ba(0.5)), (0.2, with_ba(0.7)), (0.3, with_ba(0.7))];
        assert_eq!(balanced_accuracy_threshold(&sweep), Some(0.2));
        assert_eq!(balanced_accuracy_threshold(&[]), None);
    }
}
