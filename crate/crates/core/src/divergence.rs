//! Empirical H-divergence between two groups' feature samples and the
//! generalisation bounds it feeds.
//!
//! The estimate is the proxy A-distance: train a logistic domain classifier
//! to tell the samples apart and map its held-out error `e` to
//! `2 (1 - 2e)`, floored at 0. Linear threshold classifiers over `d`
//! features have VC dimension `d + 1`.
//!
//! With `C(d, m, delta) = 4 sqrt((d ln(2m) + ln(2/delta)) / m)`, the gap in
//! favorable-prediction rates between the groups is bounded by
//! `d_hat / 2 + C / 2`, and the gap in errors by the same plus the ideal
//! joint error `lambda`, which is not observable and is reported as such.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{train_logreg, LogRegParams};
use crate::tabular::{Dataset, FeatureLayout};
use crate::Matrix;

pub const MIN_SAMPLE_ROWS: usize = 4;

/// Proxy A-distance between the row sets `a` and `b`, in [0, 2].
///
/// Both sides are subsampled (seeded) to `m = min(|a|, |b|)` rows and each
/// side is halved into train and held-out parts; side `a` is labelled 0.
pub fn empirical_h_divergence(a: &Matrix, b: &Matrix, seed: u64) -> Result<f64> {
    empirical_h_divergence_with(a, b, seed, &LogRegParams::default())
}

pub fn empirical_h_divergence_with(a: &Matrix, b: &Matrix, seed: u64, params: &LogRegParams) -> Result<f64> {
    for (side, m) in [("first sample", a), ("second sample", b)] {
        if m.rows() < MIN_SAMPLE_ROWS {
            return Err(Error::InsufficientSample {
                side,
                rows: m.rows(),
                required: MIN_SAMPLE_ROWS,
            });
        }
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: b.cols(),
        });
    }
    let m = a.rows().min(b.rows());
    let half = m / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut train = Matrix::with_cols(a.cols());
    let mut train_y = Vec::with_capacity(2 * half);
    let mut held = Matrix::with_cols(a.cols());
    let mut held_y = Vec::with_capacity(2 * (m - half));
    for (side, label) in [(a, false), (b, true)] {
        let mut idx: Vec<usize> = (0..side.rows()).collect();
        idx.shuffle(&mut rng);
        for (k, &i) in idx[..m].iter().enumerate() {
            if k < half {
                train.push_row(side.row(i))?;
                train_y.push(label);
            } else {
                held.push_row(side.row(i))?;
                held_y.push(label);
            }
        }
    }
    let n_train = train_y.len();
    let ds = Dataset::new(
        train,
        train_y,
        alloc::vec![false; n_train],
        FeatureLayout::all_numeric(a.cols()),
    )?;
    let clf = train_logreg(&ds, params)?;
    let errors = held
        .iter_rows()
        .zip(&held_y)
        .filter(|(row, &y)| (clf.score(row) >= 0.5) != y)
        .count();
    let err = errors as f64 / held_y.len() as f64;
    Ok((2.0 * (1.0 - 2.0 * err)).clamp(0.0, 2.0))
}

/// `4 sqrt((d ln(2m) + ln(2/delta)) / m)` with natural logarithms.
pub fn complexity_term(vc_dim: usize, m: usize, delta: f64) -> f64 {
    let (d, m) = (vc_dim as f64, m as f64);
    4.0 * libm::sqrt((d * libm::log(2.0 * m) + libm::log(2.0 / delta)) / m)
}

/// VC dimension of linear threshold classifiers on `n_features` inputs.
pub fn linear_vc_dim(n_features: usize) -> usize {
    n_features + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lambda {
    Unobservable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub empirical_h_divergence: f64,
    pub complexity_term: f64,
    pub vc_dim: usize,
    /// Per-side sample size.
    pub m: usize,
    pub delta: f64,
    /// Bound on the favorable-prediction rate gap.
    pub favorable_gap_bound: f64,
    /// Bound on the error gap, excluding `lambda`.
    pub error_gap_bound_ex_lambda: f64,
    pub lambda: Lambda,
}

/// Divergence estimate between privileged rows `p` and unprivileged rows
/// `u` plus both bound terms. Protected attributes must not be among the
/// columns.
pub fn bounds_report(p: &Matrix, u: &Matrix, vc_dim: usize, delta: f64, seed: u64) -> Result<DivergenceReport> {
    if vc_dim == 0 {
        return Err(Error::argument("vc_dim must be positive"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::argument("delta must lie in (0, 1)"));
    }
    let d_hat = empirical_h_divergence(p, u, seed)?;
    let m = p.rows().min(u.rows());
    let c = complexity_term(vc_dim, m, delta);
    let favorable_gap_bound = 0.5 * d_hat + 0.5 * c;
    Ok(DivergenceReport {
        empirical_h_divergence: d_hat,
        complexity_term: c,
        vc_dim,
        m,
        delta,
        favorable_gap_bound,
        error_gap_bound_ex_lambda: favorable_gap_bound,
        lambda: Lambda::Unobservable,
    })
}

/// [`bounds_report`] on a dataset split by group, with the linear VC
/// dimension of its feature count.
pub fn dataset_bounds(ds: &Dataset, delta: f64, seed: u64) -> Result<DivergenceReport> {
    bounds_report(
        &ds.group_features(true),
        &ds.group_features(false),
        linear_vc_dim(ds.n_features()),
        delta,
        seed,
    )
}
