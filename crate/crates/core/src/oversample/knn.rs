use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbors {
    pub indices: Vec<usize>,
    /// Fewer than `k` candidates existed; `indices` holds all of them.
    pub reduced: bool,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The `k` rows nearest to row `query` by Euclidean distance, excluding
/// `query` itself. Ties go to the lower index.
pub fn nearest_neighbors(points: &Matrix, query: usize, k: usize) -> Result<Neighbors> {
    if k == 0 {
        return Err(Error::argument("k must be at least 1"));
    }
    if query >= points.rows() {
        return Err(Error::argument(alloc::format!(
            "query index {query} out of range for {} rows",
            points.rows()
        )));
    }
    let q = points.row(query);
    let mut cand: Vec<(f64, usize)> = (0..points.rows())
        .filter(|&i| i != query)
        .map(|i| (sq_dist(q, points.row(i)), i))
        .collect();
    let reduced = cand.len() < k;
    let take = k.min(cand.len());
    if take < cand.len() {
        cand.select_nth_unstable_by(take, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        cand.truncate(take);
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Neighbors {
        indices: cand.into_iter().map(|(_, i)| i).collect(),
        reduced,
    })
}
