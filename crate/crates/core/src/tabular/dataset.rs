use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{BlockKind, FeatureLayout};
use crate::error::{Error, Result};
use crate::Matrix;

/// Encoded features with binary labels (`true` = favored), binary group
/// flags (`true` = privileged) and nonnegative instance weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<bool>,
    groups: Vec<bool>,
    weights: Vec<f64>,
    layout: FeatureLayout,
}

impl Dataset {
    /// Builds a dataset with unit weights, checking every invariant.
    pub fn new(features: Matrix, labels: Vec<bool>, groups: Vec<bool>, layout: FeatureLayout) -> Result<Self> {
        let n = features.rows();
        Self::with_weights(features, labels, groups, alloc::vec![1.0; n], layout)
    }

    pub fn with_weights(
        features: Matrix,
        labels: Vec<bool>,
        groups: Vec<bool>,
        weights: Vec<f64>,
        layout: FeatureLayout,
    ) -> Result<Self> {
        let ds = Self {
            features,
            labels,
            groups,
            weights,
            layout,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// All-numeric layout with generated column names.
    pub fn numeric(features: Matrix, labels: Vec<bool>, groups: Vec<bool>) -> Result<Self> {
        let layout = FeatureLayout::all_numeric(features.cols());
        Self::new(features, labels, groups, layout)
    }

    fn validate(&self) -> Result<()> {
        let n = self.features.rows();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for len in [self.labels.len(), self.groups.len(), self.weights.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        if self.layout.width() != self.features.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.layout.width(),
                found: self.features.cols(),
            });
        }
        if self.features.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::argument("features must be finite"));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::argument("weights must be finite and nonnegative"));
        }
        // Unseen categories encode as an all-zero block, so a block sums to 0 or 1.
        for block in self.layout.blocks() {
            if let BlockKind::OneHot { .. } = block.kind {
                for row in self.features.iter_rows() {
                    let cells = &row[block.range()];
                    let ones = cells.iter().filter(|&&v| v == 1.0).count();
                    let zeros = cells.iter().filter(|&&v| v == 0.0).count();
                    if ones > 1 || ones + zeros != cells.len() {
                        return Err(Error::Schema {
                            column: block.name.clone(),
                            reason: "one-hot block is not a 0/1 indicator".into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn groups(&self) -> &[bool] {
        &self.groups
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    /// Rows at `indices`, in order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let pick = |v: &[bool]| indices.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::with_weights(
            self.features.select_rows(indices),
            pick(&self.labels),
            pick(&self.groups),
            indices.iter().map(|&i| self.weights[i]).collect(),
            self.layout.clone(),
        )
    }

    /// Feature rows of one group (`true` = privileged).
    pub fn group_features(&self, privileged: bool) -> Matrix {
        let idx: Vec<usize> = (0..self.n_rows()).filter(|&i| self.groups[i] == privileged).collect();
        self.features.select_rows(&idx)
    }

    pub fn replace_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        self.weights = weights;
        self.validate()?;
        Ok(self)
    }

    /// Same rows and labels with a transformed feature matrix.
    pub(crate) fn map_features(mut self, f: impl FnOnce(&mut Matrix)) -> Result<Self> {
        f(&mut self.features);
        self.validate()?;
        Ok(self)
    }

    pub(crate) fn push_row(&mut self, row: &[f64], label: bool, group: bool, weight: f64) -> Result<()> {
        self.features.push_row(row)?;
        self.labels.push(label);
        self.groups.push(group);
        self.weights.push(weight);
        Ok(())
    }
}
