use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::Result;

/// Per-column min-max ranges for the numeric blocks of a layout. One-hot
/// columns have no range and pass through unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    ranges: Vec<Option<(f64, f64)>>,
}

impl MinMaxScaler {
    /// Fits ranges on the numeric columns of `ds`.
    pub fn fit(ds: &Dataset) -> Self {
        let mask = ds.layout().numeric_mask();
        let ranges = mask
            .iter()
            .enumerate()
            .map(|(j, &numeric)| {
                numeric.then(|| {
                    ds.features()
                        .iter_rows()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                            (lo.min(r[j]), hi.max(r[j]))
                        })
                })
            })
            .collect();
        Self { ranges }
    }

    /// Maps observed min to 0 and max to 1; a constant column maps to 0.
    /// Values outside the fitted range are not clipped.
    pub fn scale(&self, j: usize, v: f64) -> f64 {
        match self.ranges[j] {
            Some((lo, hi)) if hi > lo => (v - lo) / (hi - lo),
            Some(_) => 0.0,
            None => v,
        }
    }

    pub fn inverse(&self, j: usize, v: f64) -> f64 {
        match self.ranges[j] {
            Some((lo, hi)) if hi > lo => lo + v * (hi - lo),
            Some((lo, _)) => lo,
            None => v,
        }
    }

    pub fn transform(&self, ds: Dataset) -> Result<Dataset> {
        let cols = self.ranges.len();
        ds.map_features(|m| {
            for (k, v) in m.as_mut_slice().iter_mut().enumerate() {
                *v = self.scale(k % cols, *v);
            }
        })
    }
}
