//! Probabilistic binary classifiers with instance weights.

mod forest;
mod logreg;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use forest::{train_forest, FeatureRule, FeaturesPerSplit, ForestParams, Node, RandomForest, Tree};
pub use logreg::{
    logistic_gradient, logistic_objective, train_logreg, FitInfo, Gradient, LogRegParams, LogisticRegression,
};

use crate::error::Result;
use crate::tabular::Dataset;
use crate::Matrix;

/// Which classifier to train, with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classifier {
    Logreg(LogRegParams),
    Forest(ForestParams),
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier::Logreg(LogRegParams::default())
    }
}

impl Classifier {
    /// Trains on `train`. For forests `seed` replaces `params.seed`.
    pub fn train(&self, train: &Dataset, seed: u64) -> Result<Model> {
        match *self {
            Classifier::Logreg(params) => Ok(Model::Logreg {
                model: train_logreg(train, &params)?,
                params,
            }),
            Classifier::Forest(params) => {
                let params = ForestParams { seed, ..params };
                Ok(Model::Forest {
                    model: train_forest(train, &params)?,
                    params,
                })
            }
        }
    }
}

/// A trained scorer plus the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Logreg {
        params: LogRegParams,
        model: LogisticRegression,
    },
    Forest {
        params: ForestParams,
        model: RandomForest,
    },
}

impl Model {
    /// Probability of the favored label, in [0, 1].
    pub fn score(&self, row: &[f64]) -> f64 {
        match self {
            Model::Logreg { model, .. } => model.score(row),
            Model::Forest { model, .. } => model.score(row),
        }
    }

    pub fn scores(&self, x: &Matrix) -> Vec<f64> {
        x.iter_rows().map(|r| self.score(r)).collect()
    }
}

/// `score >= threshold` per row.
pub fn threshold_labels(scores: &[f64], threshold: f64) -> Vec<bool> {
    scores.iter().map(|&s| s >= threshold).collect()
}

pub fn predict(model: &Model, x: &Matrix, threshold: f64) -> Vec<bool> {
    threshold_labels(&model.scores(x), threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn threshold_boundaries() {
        let s = [0.2, 0.5, 0.9, 0.0];
        assert_eq!(threshold_labels(&s, 0.0), vec![true; 4]);
        assert_eq!(threshold_labels(&s, 0.5), vec![false, true, true, false]);
        assert_eq!(threshold_labels(&[0.999], 1.0), vec![false]);
    }
}
