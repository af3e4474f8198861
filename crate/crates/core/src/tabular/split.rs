use alloc::vec::Vec;
use core::hash::Hasher;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Cell, Dataset};
use crate::error::{Error, Result};

/// A train/test partition plus the source row indices of each part.
#[derive(Debug, Clone)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

impl Split {
    /// FNV-1a hash of the sorted test indices. Two runs with equal
    /// fingerprints used the same partition.
    pub fn fingerprint(&self) -> u64 {
        let mut h = fnv::FnvHasher::default();
        h.write_usize(self.test_indices.len());
        for &i in &self.test_indices {
            h.write_u64(i as u64);
        }
        h.finish()
    }
}

/// `round_half_up(n * test_fraction)`.
pub fn split_test_size(n: usize, test_fraction: f64) -> usize {
    libm::floor(n as f64 * test_fraction + 0.5) as usize
}

/// Stratified seeded split on the (group, label) cell.
///
/// The test part has exactly `round_half_up(n * test_fraction)` rows,
/// apportioned to cells by largest remainder. A cell with at least two
/// members always keeps one in train. Both parts preserve source row order.
pub fn split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<Split> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::argument("test_fraction must lie in (0, 1)"));
    }
    let n = ds.n_rows();
    if n < 2 {
        return Err(Error::argument("split needs at least 2 rows"));
    }
    let total_test = split_test_size(n, test_fraction);
    if total_test == 0 || total_test >= n {
        return Err(Error::argument(alloc::format!(
            "test_fraction {test_fraction} leaves an empty part for n = {n}"
        )));
    }

    let mut members: [Vec<usize>; 4] = Default::default();
    for i in 0..n {
        members[Cell::of(ds.groups()[i], ds.labels()[i]).id() as usize].push(i);
    }

    let alloc = apportion(&members.each_ref().map(|m| m.len()), n, total_test)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_indices = Vec::with_capacity(total_test);
    let mut train_indices = Vec::with_capacity(n - total_test);
    for (cell, take) in members.iter_mut().zip(alloc) {
        cell.shuffle(&mut rng);
        test_indices.extend_from_slice(&cell[..take]);
        train_indices.extend_from_slice(&cell[take..]);
    }
    test_indices.sort_unstable();
    train_indices.sort_unstable();

    Ok(Split {
        train: ds.subset(&train_indices)?,
        test: ds.subset(&test_indices)?,
        train_indices,
        test_indices,
    })
}

/// Largest-remainder apportionment of `total` test rows over cells, capped
/// so that cells of size >= 2 keep a member in train.
fn apportion(counts: &[usize; 4], n: usize, total: usize) -> Result<[usize; 4]> {
    let cap = counts.map(|c| if c >= 2 { c - 1 } else { c });
    let mut take = [0usize; 4];
    let mut rem = [0usize; 4];
    for k in 0..4 {
        take[k] = (counts[k] * total / n).min(cap[k]);
        rem[k] = counts[k] * total % n;
    }
    // Remainder order: larger remainder first, then lower cell id.
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| rem[b].cmp(&rem[a]).then(a.cmp(&b)));

    let mut missing = total - take.iter().sum::<usize>();
    while missing > 0 {
        let before = missing;
        for &k in &order {
            if missing > 0 && take[k] < cap[k] {
                take[k] += 1;
                missing -= 1;
            }
        }
        if missing == before {
            return Err(Error::argument(
                "test_fraction too large to keep every cell represented in train",
            ));
        }
    }
    Ok(take)
}
