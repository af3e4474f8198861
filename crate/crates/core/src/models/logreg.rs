use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogRegParams {
    pub learning_rate: f64,
    pub l2: f64,
    pub max_iters: usize,
    /// Stop once the full gradient norm is at or below this.
    pub tol: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            l2: 1e-4,
            max_iters: 2000,
            tol: 1e-6,
        }
    }
}

impl LogRegParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::argument("learning_rate must be positive"));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::argument("l2 must be nonnegative"));
        }
        if self.max_iters == 0 {
            return Err(Error::argument("max_iters must be positive"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::argument("tol must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitInfo {
    pub iterations: usize,
    pub gradient_norm: f64,
    /// `false` when `max_iters` ran out before the gradient reached `tol`.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticRegression {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub fit: FitInfo,
}

impl LogisticRegression {
    pub fn score(&self, row: &[f64]) -> f64 {
        sigmoid(linear(&self.coefficients, self.intercept, row))
    }
}

#[inline]
fn linear(coef: &[f64], intercept: f64, row: &[f64]) -> f64 {
    intercept + coef.iter().zip(row).map(|(c, x)| c * x).sum::<f64>()
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + libm::log1p(libm::exp(-libm::fabs(z)))
}

/// Gradient of [`logistic_objective`]: coefficient part and intercept part.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl Gradient {
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coefficients.iter().map(|g| g * g).sum::<f64>() + self.intercept * self.intercept)
    }
}

/// Weighted mean negative log-likelihood plus `l2 / 2 * |coef|^2`.
///
/// The likelihood is normalised by the total weight, so scaling every
/// weight by a constant leaves the objective unchanged. The intercept is
/// not penalised.
pub fn logistic_objective(ds: &Dataset, l2: f64, coef: &[f64], intercept: f64) -> Result<f64> {
    let total = total_weight(ds)?;
    let nll: f64 = ds
        .features()
        .iter_rows()
        .zip(ds.labels())
        .zip(ds.weights())
        .map(|((row, &y), &w)| {
            let z = linear(coef, intercept, row);
            w * (softplus(z) - if y { z } else { 0.0 })
        })
        .sum();
    Ok(nll / total + 0.5 * l2 * coef.iter().map(|c| c * c).sum::<f64>())
}

pub fn logistic_gradient(ds: &Dataset, l2: f64, coef: &[f64], intercept: f64) -> Result<Gradient> {
    let total = total_weight(ds)?;
    let mut g = Gradient {
        coefficients: coef.iter().map(|c| l2 * c).collect(),
        intercept: 0.0,
    };
    for ((row, &y), &w) in ds.features().iter_rows().zip(ds.labels()).zip(ds.weights()) {
        let r = w * (sigmoid(linear(coef, intercept, row)) - if y { 1.0 } else { 0.0 }) / total;
        for (gj, xj) in g.coefficients.iter_mut().zip(row) {
            *gj += r * xj;
        }
        g.intercept += r;
    }
    Ok(g)
}

fn total_weight(ds: &Dataset) -> Result<f64> {
    let total: f64 = ds.weights().iter().sum();
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::argument("total instance weight is zero"))
    }
}

/// Full-batch gradient descent from zero on [`logistic_objective`].
pub fn train_logreg(train: &Dataset, params: &LogRegParams) -> Result<LogisticRegression> {
    params.validate()?;
    if train.n_rows() < 2 {
        return Err(Error::argument("logistic regression needs at least 2 rows"));
    }
    let d = train.n_features();
    let mut coef = alloc::vec![0.0; d];
    let mut intercept = 0.0;
    let mut iterations = 0;
    loop {
        let loss = logistic_objective(train, params.l2, &coef, intercept)?;
        if !loss.is_finite() {
            return Err(Error::Divergence { iteration: iterations });
        }
        let g = logistic_gradient(train, params.l2, &coef, intercept)?;
        let norm = g.norm();
        if !norm.is_finite() {
            return Err(Error::Divergence { iteration: iterations });
        }
        if norm <= params.tol || iterations == params.max_iters {
            return Ok(LogisticRegression {
                coefficients: coef,
                intercept,
                fit: FitInfo {
                    iterations,
                    gradient_norm: norm,
                    converged: norm <= params.tol,
                },
            });
        }
        for (c, gc) in coef.iter_mut().zip(&g.coefficients) {
            *c -= params.learning_rate * gc;
        }
        intercept -= params.learning_rate * g.intercept;
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;
    use alloc::vec;

    fn separable() -> Dataset {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..10 {
            rows.push([0.0]);
            y.push(false);
            rows.push([1.0]);
            y.push(true);
        }
        let g = (0..y.len()).map(|i| i % 4 < 2).collect();
        Dataset::numeric(Matrix::from_rows(&rows).unwrap(), y, g).unwrap()
    }

    #[test]
    fn orders_separable_points() {
        let m = train_logreg(&separable(), &LogRegParams::default()).unwrap();
        assert!(m.score(&[0.0]) < 0.5);
        assert!(m.score(&[1.0]) > 0.5);
    }

    #[test]
    fn prior_only_fit() {
        let x = Matrix::from_rows(&[[0.1], [0.5], [0.9], [0.3]]).unwrap();
        let ds = Dataset::numeric(x, vec![true; 4], vec![true, false, true, false]).unwrap();
        let m = train_logreg(&ds, &LogRegParams::default()).unwrap();
        for v in [0.0, 0.3, 1.0] {
            assert!(m.score(&[v]) > 0.5);
        }
    }

    #[test]
    fn weight_scale_invariance() {
        let ds = separable();
        let doubled = ds.clone().replace_weights(vec![2.0; ds.n_rows()]).unwrap();
        let p = LogRegParams::default();
        let a = train_logreg(&ds, &p).unwrap();
        let b = train_logreg(&doubled, &p).unwrap();
        assert!((a.intercept - b.intercept).abs() < 1e-9);
        assert!((a.coefficients[0] - b.coefficients[0]).abs() < 1e-9);
    }

    #[test]
    fn non_converged_is_flagged() {
        let p = LogRegParams {
            max_iters: 3,
            ..Default::default()
        };
        let m = train_logreg(&separable(), &p).unwrap();
        assert_eq!(m.fit.iterations, 3);
        assert!(!m.fit.converged);
        assert!(m.fit.gradient_norm > p.tol);
    }

    #[test]
    fn huge_step_diverges() {
        let x = Matrix::from_rows(&[[1e200], [-1e200]]).unwrap();
        let ds = Dataset::numeric(x, vec![true, false], vec![true, false]).unwrap();
        let p = LogRegParams {
            learning_rate: 1e200,
            ..Default::default()
        };
        assert!(matches!(train_logreg(&ds, &p), Err(Error::Divergence { .. })));
    }

    #[test]
    fn scores_stay_in_unit_interval() {
        for z in [-800.0, -30.0, 0.0, 30.0, 800.0] {
            let s = sigmoid(z);
            assert!((0.0..=1.0).contains(&s) && s.is_finite());
        }
    }
}
