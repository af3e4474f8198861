//! Augmented CSV output: the input records unchanged, followed by synthetic
//! rows decoded back into the input's column vocabulary.

use synthfair_core::oversample::{apply_plan, OversamplePlan, Strategy};

use crate::error::{AppError, AppResult};
use crate::io::Loaded;

pub const SYNTHETIC_COLUMN: &str = "synthetic";

#[derive(Debug, Clone)]
pub struct Augmented {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub plan: OversamplePlan,
}

/// Plans `strategy` on the whole of `loaded` and renders the result.
/// Columns outside the schema are left empty in synthetic rows.
pub fn debias(
    loaded: &Loaded,
    strategy: Strategy,
    k_neighbors: usize,
    seed: u64,
    mark_synthetic: bool,
) -> AppResult<Augmented> {
    let plan = OversamplePlan::for_dataset(&loaded.dataset, strategy, k_neighbors, seed)?;
    let out = apply_plan(&loaded.dataset, &plan)?;

    let mut headers = loaded.table.headers.clone();
    if mark_synthetic {
        if headers.iter().any(|h| h == SYNTHETIC_COLUMN) {
            return Err(AppError::Usage(format!(
                "input already has a `{SYNTHETIC_COLUMN}` column; drop --mark-synthetic"
            )));
        }
        headers.push(SYNTHETIC_COLUMN.to_string());
    }

    let schema = loaded.encoding.schema();
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(out.n_rows());
    for rec in &loaded.table.records {
        let mut r = rec.fields.clone();
        if mark_synthetic {
            r.push("0".into());
        }
        rows.push(r);
    }
    for i in loaded.dataset.n_rows()..out.n_rows() {
        let decoded = loaded.encoding.decode_features(out.row(i), Some(&loaded.scaler));
        let mut r: Vec<String> = loaded
            .table
            .headers
            .iter()
            .map(|h| {
                if *h == schema.label_column {
                    loaded.encoding.label_value(out.labels()[i]).to_string()
                } else if *h == schema.protected_column {
                    loaded.encoding.group_value(out.groups()[i]).to_string()
                } else {
                    decoded
                        .iter()
                        .find(|(name, _)| name == h)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default()
                }
            })
            .collect();
        if mark_synthetic {
            r.push("1".into());
        }
        rows.push(r);
    }
    Ok(Augmented { headers, rows, plan })
}
