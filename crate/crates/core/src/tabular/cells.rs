use core::fmt;

use serde::{Deserialize, Serialize};

use super::Dataset;

/// One of the four (group, label) cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    PrivilegedFavored,
    PrivilegedUnfavored,
    UnprivilegedFavored,
    UnprivilegedUnfavored,
}

impl Cell {
    pub const ALL: [Cell; 4] = [
        Cell::PrivilegedFavored,
        Cell::PrivilegedUnfavored,
        Cell::UnprivilegedFavored,
        Cell::UnprivilegedUnfavored,
    ];

    pub fn of(privileged: bool, favored: bool) -> Self {
        match (privileged, favored) {
            (true, true) => Cell::PrivilegedFavored,
            (true, false) => Cell::PrivilegedUnfavored,
            (false, true) => Cell::UnprivilegedFavored,
            (false, false) => Cell::UnprivilegedUnfavored,
        }
    }

    pub fn id(self) -> u64 {
        match self {
            Cell::PrivilegedFavored => 0,
            Cell::PrivilegedUnfavored => 1,
            Cell::UnprivilegedFavored => 2,
            Cell::UnprivilegedUnfavored => 3,
        }
    }

    pub fn is_privileged(self) -> bool {
        matches!(self, Cell::PrivilegedFavored | Cell::PrivilegedUnfavored)
    }

    pub fn is_favored(self) -> bool {
        matches!(self, Cell::PrivilegedFavored | Cell::UnprivilegedFavored)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cell::PrivilegedFavored => "privileged-favored",
            Cell::PrivilegedUnfavored => "privileged-unfavored",
            Cell::UnprivilegedFavored => "unprivileged-favored",
            Cell::UnprivilegedUnfavored => "unprivileged-unfavored",
        })
    }
}

/// Row tallies per (group, label) cell. Also used for per-cell synthetic
/// targets in an oversampling plan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    pub privileged_favored: usize,
    pub privileged_unfavored: usize,
    pub unprivileged_favored: usize,
    pub unprivileged_unfavored: usize,
}

impl CellCounts {
    pub fn get(&self, cell: Cell) -> usize {
        match cell {
            Cell::PrivilegedFavored => self.privileged_favored,
            Cell::PrivilegedUnfavored => self.privileged_unfavored,
            Cell::UnprivilegedFavored => self.unprivileged_favored,
            Cell::UnprivilegedUnfavored => self.unprivileged_unfavored,
        }
    }

    pub fn get_mut(&mut self, cell: Cell) -> &mut usize {
        match cell {
            Cell::PrivilegedFavored => &mut self.privileged_favored,
            Cell::PrivilegedUnfavored => &mut self.privileged_unfavored,
            Cell::UnprivilegedFavored => &mut self.unprivileged_favored,
            Cell::UnprivilegedUnfavored => &mut self.unprivileged_unfavored,
        }
    }

    pub fn total(&self) -> usize {
        Cell::ALL.iter().map(|&c| self.get(c)).sum()
    }

    pub fn privileged(&self) -> usize {
        self.privileged_favored + self.privileged_unfavored
    }

    pub fn unprivileged(&self) -> usize {
        self.unprivileged_favored + self.unprivileged_unfavored
    }

    pub fn favored(&self) -> usize {
        self.privileged_favored + self.unprivileged_favored
    }

    /// Favored fraction of the privileged group; `None` for an empty group.
    pub fn privileged_base_rate(&self) -> Option<f64> {
        ratio(self.privileged_favored, self.privileged())
    }

    /// Favored fraction of the unprivileged group; `None` for an empty group.
    pub fn unprivileged_base_rate(&self) -> Option<f64> {
        ratio(self.unprivileged_favored, self.unprivileged())
    }

    /// `r_p - r_u`, defined only when both groups are nonempty.
    pub fn base_rate_gap(&self) -> Option<f64> {
        Some(self.privileged_base_rate()? - self.unprivileged_base_rate()?)
    }

    pub fn pooled_base_rate(&self) -> Option<f64> {
        ratio(self.favored(), self.total())
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

impl core::ops::Add for CellCounts {
    type Output = CellCounts;

    fn add(self, rhs: CellCounts) -> CellCounts {
        CellCounts {
            privileged_favored: self.privileged_favored + rhs.privileged_favored,
            privileged_unfavored: self.privileged_unfavored + rhs.privileged_unfavored,
            unprivileged_favored: self.unprivileged_favored + rhs.unprivileged_favored,
            unprivileged_unfavored: self.unprivileged_unfavored + rhs.unprivileged_unfavored,
        }
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Exact tallies of the four (group, label) cells. Weights are ignored.
pub fn cell_counts(ds: &Dataset) -> CellCounts {
    let mut counts = CellCounts::default();
    for (&g, &y) in ds.groups().iter().zip(ds.labels()) {
        *counts.get_mut(Cell::of(g, y)) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    fn ds(y: &[bool], g: &[bool]) -> Dataset {
        let x = Matrix::zeros(y.len(), 1);
        Dataset::numeric(x, y.to_vec(), g.to_vec()).unwrap()
    }

    #[test]
    fn counts_small_example() {
        let c = cell_counts(&ds(&[true, true, false, false], &[true, true, true, false]));
        assert_eq!(c.privileged_favored, 2);
        assert_eq!(c.privileged_unfavored, 1);
        assert_eq!(c.unprivileged_favored, 0);
        assert_eq!(c.unprivileged_unfavored, 1);
        assert_eq!(c.privileged_base_rate(), Some(2.0 / 3.0));
        assert_eq!(c.unprivileged_base_rate(), Some(0.0));
    }

    #[test]
    fn single_cell_leaves_unprivileged_rate_undefined() {
        let c = cell_counts(&ds(&[true; 5], &[true; 5]));
        assert_eq!(c.privileged_favored, 5);
        assert_eq!(c.total(), 5);
        assert_eq!(c.privileged_base_rate(), Some(1.0));
        assert_eq!(c.unprivileged_base_rate(), None);
        assert_eq!(c.base_rate_gap(), None);
    }

    #[test]
    fn identical_labels_across_groups_give_zero_gap() {
        let c = cell_counts(&ds(&[true, false, true, false], &[true, true, false, false]));
        assert_eq!(c.base_rate_gap(), Some(0.0));
    }
}
