//! Group-targeted synthetic oversampling.
//!
//! A [`Strategy`] names which (group, label) cells receive synthetic rows.
//! [`target_counts`] sizes them so the groups' favored base rates meet, and
//! [`apply_plan`] generates the rows with within-cell SMOTE. Original rows
//! are never edited, dropped or reweighted; synthetic rows are appended.

mod knn;
mod smote;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use knn::{nearest_neighbors, Neighbors};
pub use smote::smote_sample;

use crate::error::{Error, Result};
use crate::tabular::{cell_counts, Cell, CellCounts, Dataset};
use crate::Matrix;

pub const DEFAULT_K_NEIGHBORS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Add favored rows to the unprivileged group until its base rate
    /// reaches the privileged rate.
    ExpandUnprivilegedFavored,
    /// Add unfavored rows to the privileged group until its base rate falls
    /// to the unprivileged rate.
    ExpandPrivilegedUnfavored,
    /// Both of the above, meeting at the pooled base rate.
    Combined,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::ExpandUnprivilegedFavored,
        Strategy::ExpandPrivilegedUnfavored,
        Strategy::Combined,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::ExpandUnprivilegedFavored => "expand-unprivileged-favored",
            Strategy::ExpandPrivilegedUnfavored => "expand-privileged-unfavored",
            Strategy::Combined => "combined",
        }
    }

    /// Cells this strategy may add rows to.
    pub fn permits(self, cell: Cell) -> bool {
        match self {
            Strategy::ExpandUnprivilegedFavored => cell == Cell::UnprivilegedFavored,
            Strategy::ExpandPrivilegedUnfavored => cell == Cell::PrivilegedUnfavored,
            Strategy::Combined => {
                matches!(cell, Cell::UnprivilegedFavored | Cell::PrivilegedUnfavored)
            }
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::argument(alloc::format!("unknown strategy `{s}`")))
    }
}

fn ceil_div(num: u128, den: u128) -> usize {
    num.div_ceil(den) as usize
}

/// Synthetic row counts per cell that close the base-rate gap.
///
/// With `D = PF * n_u - UF * n_p` (positive exactly when `r_p > r_u`):
///
/// * expand-unprivileged-favored adds `ceil(D / PU)` to UF, the least count
///   that lifts `r_u` to at least `r_p`;
/// * expand-privileged-unfavored adds `ceil(D / UF)` to PU, the least count
///   that lowers `r_p` to at most `r_u`;
/// * combined adds `ceil(D / (PU + UU))` to UF and `ceil(D / (PF + UF))` to
///   PU, moving both rates to the pooled rate `(PF + UF) / n`.
///
/// All targets are zero when `r_u >= r_p` already. Integer arithmetic
/// throughout, so the ceilings are exact. Only the counts are checked here;
/// see [`check_support`] for whether SMOTE can fill a target.
pub fn target_counts(cells: &CellCounts, strategy: Strategy) -> Result<CellCounts> {
    let (pf, pu, uf, uu) = (
        cells.privileged_favored as u128,
        cells.privileged_unfavored as u128,
        cells.unprivileged_favored as u128,
        cells.unprivileged_unfavored as u128,
    );
    let (n_p, n_u) = (pf + pu, uf + uu);
    if n_p == 0 || n_u == 0 {
        return Err(Error::argument("both groups must be nonempty"));
    }
    let mut targets = CellCounts::default();
    if pf * n_u <= uf * n_p {
        return Ok(targets);
    }
    let gap = pf * n_u - uf * n_p;
    match strategy {
        Strategy::ExpandUnprivilegedFavored => {
            if pu == 0 {
                return Err(Error::UnreachableTarget(
                    "privileged base rate is 1; no finite number of favored rows reaches it".into(),
                ));
            }
            targets.unprivileged_favored = ceil_div(gap, pu);
        }
        Strategy::ExpandPrivilegedUnfavored => {
            if uf == 0 {
                return Err(Error::UnreachableTarget(
                    "unprivileged base rate is 0; no finite number of unfavored rows reaches it".into(),
                ));
            }
            targets.privileged_unfavored = ceil_div(gap, uf);
        }
        Strategy::Combined => {
            // r_u < pooled < r_p here, so both denominators are positive.
            targets.unprivileged_favored = ceil_div(gap, pu + uu);
            targets.privileged_unfavored = ceil_div(gap, pf + uf);
        }
    }
    Ok(targets)
}

/// Every targeted cell needs two members so SMOTE has a neighbor.
pub fn check_support(cells: &CellCounts, targets: &CellCounts) -> Result<()> {
    for cell in Cell::ALL {
        if targets.get(cell) > 0 && cells.get(cell) < 2 {
            return Err(Error::InsufficientSupport {
                cell,
                count: cells.get(cell),
            });
        }
    }
    Ok(())
}

/// Everything needed to regenerate an augmented training set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OversamplePlan {
    pub strategy: Strategy,
    pub k_neighbors: usize,
    pub seed: u64,
    pub targets: CellCounts,
}

impl OversamplePlan {
    /// Plan with targets computed from `train`'s cell counts.
    /// Fails with [`Error::InsufficientSupport`] when a targeted cell has
    /// fewer than two members.
    pub fn for_dataset(train: &Dataset, strategy: Strategy, k_neighbors: usize, seed: u64) -> Result<Self> {
        let cells = cell_counts(train);
        let targets = target_counts(&cells, strategy)?;
        check_support(&cells, &targets)?;
        Ok(Self {
            strategy,
            k_neighbors,
            seed,
            targets,
        })
    }

    pub fn total_synthetic(&self) -> usize {
        self.targets.total()
    }

    fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(Error::argument("k_neighbors must be at least 1"));
        }
        for cell in Cell::ALL {
            if self.targets.get(cell) > 0 && !self.strategy.permits(cell) {
                return Err(Error::argument(alloc::format!(
                    "strategy {} does not add rows to cell {cell}",
                    self.strategy
                )));
            }
        }
        Ok(())
    }
}

/// Appends `plan.targets` synthetic rows per cell to `train`.
///
/// Per targeted cell: draw a donor uniformly from the cell, one of its
/// `k` nearest same-cell neighbors uniformly, and `u` uniformly from [0, 1),
/// then append [`smote_sample`] with the cell's labels and weight 1. Each
/// cell draws from its own stream seeded with `seed ^ cell_id`.
pub fn apply_plan(train: &Dataset, plan: &OversamplePlan) -> Result<Dataset> {
    plan.validate()?;
    let mut out = train.clone();
    for cell in Cell::ALL {
        let target = plan.targets.get(cell);
        if target == 0 {
            continue;
        }
        for row in synthesize_cell(train, cell, target, plan.k_neighbors, plan.seed)? {
            out.push_row(&row, cell.is_favored(), cell.is_privileged(), 1.0)?;
        }
    }
    Ok(out)
}

fn synthesize_cell(train: &Dataset, cell: Cell, count: usize, k: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let members: Vec<usize> = (0..train.n_rows())
        .filter(|&i| Cell::of(train.groups()[i], train.labels()[i]) == cell)
        .collect();
    if members.len() < 2 {
        return Err(Error::InsufficientSupport {
            cell,
            count: members.len(),
        });
    }
    let points: Matrix = train.features().select_rows(&members);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ cell.id());
    let mut cache: Vec<Option<Vec<usize>>> = alloc::vec![None; members.len()];
    let mut warned = false;
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let donor = rng.random_range(0..members.len());
        if cache[donor].is_none() {
            let nn = nearest_neighbors(&points, donor, k)?;
            if nn.reduced && !warned {
                log::warn!(
                    "cell {cell} has {} members; SMOTE using {} neighbors instead of {k}",
                    members.len(),
                    nn.indices.len()
                );
                warned = true;
            }
            cache[donor] = Some(nn.indices);
        }
        let nn = cache[donor].as_ref().unwrap();
        let partner = nn[rng.random_range(0..nn.len())];
        let u: f64 = rng.random();
        rows.push(smote_sample(train.layout(), points.row(donor), points.row(partner), u)?);
    }
    Ok(rows)
}
