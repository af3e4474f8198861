//! Reweighing (pre-processing) and reject option classification
//! (post-processing).

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{cell_counts, Cell, Dataset};

/// Weight for each (group, label) cell: `n_g n_y / (n n_gy)`.
pub fn reweigh_weights(ds: &Dataset) -> Result<[f64; 4]> {
    let counts = cell_counts(ds);
    if let Some(&cell) = Cell::ALL.iter().find(|&&c| counts.get(c) == 0) {
        return Err(Error::UndefinedWeight(cell));
    }
    let n = counts.total() as f64;
    let favored = counts.favored();
    Ok(Cell::ALL.map(|c| {
        let n_g = if c.is_privileged() {
            counts.privileged()
        } else {
            counts.unprivileged()
        };
        let n_y = if c.is_favored() {
            favored
        } else {
            counts.total() - favored
        };
        (n_g as f64 * n_y as f64) / (n * counts.get(c) as f64)
    }))
}

/// Replaces every instance weight with its cell's reweighing weight.
/// Features and labels are untouched.
pub fn reweigh(train: Dataset) -> Result<Dataset> {
    let w = reweigh_weights(&train)?;
    let weights = train
        .labels()
        .iter()
        .zip(train.groups())
        .map(|(&y, &g)| w[Cell::of(g, y).id() as usize])
        .collect();
    train.replace_weights(weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectOptionParams {
    pub margin: f64,
    pub base_threshold: f64,
}

impl Default for RejectOptionParams {
    fn default() -> Self {
        Self {
            margin: 0.1,
            base_threshold: 0.5,
        }
    }
}

impl RejectOptionParams {
    pub fn new(margin: f64, base_threshold: f64) -> Result<Self> {
        let p = Self { margin, base_threshold };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 0.0 && self.margin <= 0.5) {
            return Err(Error::argument("reject option margin must lie in (0, 0.5]"));
        }
        if !(0.0..=1.0).contains(&self.base_threshold) {
            return Err(Error::argument("reject option base threshold must lie in [0, 1]"));
        }
        Ok(())
    }

    /// The critical band, clipped to [0, 1]; both ends inclusive.
    pub fn band(&self) -> (f64, f64) {
        (
            (self.base_threshold - self.margin).max(0.0),
            (self.base_threshold + self.margin).min(1.0),
        )
    }
}

/// Inside the band unprivileged rows get the favored label and privileged
/// rows the unfavored one; elsewhere `score >= base_threshold`.
pub fn reject_option(scores: &[f64], groups: &[bool], params: &RejectOptionParams) -> Result<Vec<bool>> {
    params.validate()?;
    if scores.len() != groups.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: groups.len(),
        });
    }
    let (lo, hi) = params.band();
    Ok(scores
        .iter()
        .zip(groups)
        .map(|(&s, &privileged)| {
            if lo <= s && s <= hi {
                !privileged
            } else {
                s >= params.base_threshold
            }
        })
        .collect())
}
