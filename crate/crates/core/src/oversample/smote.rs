use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tabular::{BlockKind, FeatureLayout};

/// One SMOTE point between `x` and its neighbor `x_nn`.
///
/// Numeric columns interpolate as `x + u * (x_nn - x)`. A one-hot block is
/// copied whole from `x` when `u < 0.5` and from `x_nn` otherwise, so the
/// block stays a valid indicator.
pub fn smote_sample(layout: &FeatureLayout, x: &[f64], x_nn: &[f64], u: f64) -> Result<Vec<f64>> {
    if x.len() != x_nn.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: x_nn.len(),
        });
    }
    if layout.width() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: layout.width(),
            found: x.len(),
        });
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::argument("interpolation factor must lie in [0, 1]"));
    }
    let mut out = x.to_vec();
    for block in layout.blocks() {
        match block.kind {
            BlockKind::Numeric => {
                let j = block.offset;
                out[j] = x[j] + u * (x_nn[j] - x[j]);
            }
            BlockKind::OneHot { .. } => {
                if u >= 0.5 {
                    out[block.range()].copy_from_slice(&x_nn[block.range()]);
                }
            }
        }
    }
    Ok(out)
}
