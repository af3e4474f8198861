use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureRule {
    Sqrt,
}

/// Candidate features per split: a fixed count or `"sqrt"` (ceil of the
/// square root of the feature count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeaturesPerSplit {
    Count(usize),
    Rule(FeatureRule),
}

impl FeaturesPerSplit {
    pub fn resolve(self, d: usize) -> usize {
        let k = match self {
            FeaturesPerSplit::Count(k) => k,
            FeaturesPerSplit::Rule(FeatureRule::Sqrt) => libm::ceil(libm::sqrt(d as f64)) as usize,
        };
        k.clamp(1, d.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub features_per_split: FeaturesPerSplit,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 8,
            min_leaf: 5,
            features_per_split: FeaturesPerSplit::Rule(FeatureRule::Sqrt),
            seed: 0,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 || self.max_depth == 0 || self.min_leaf == 0 {
            return Err(Error::argument("n_trees, max_depth and min_leaf must be positive"));
        }
        if self.features_per_split == FeaturesPerSplit::Count(0) {
            return Err(Error::argument("features_per_split must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Leaf {
        favored: bool,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Flat node array; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn vote(&self, row: &[f64]) -> bool {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { favored } => return favored,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub trees: Vec<Tree>,
}

impl RandomForest {
    /// Fraction of trees voting favored.
    pub fn score(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.vote(row)).count();
        votes as f64 / self.trees.len() as f64
    }
}

/// Bagged Gini trees. Tree `t` draws from stream `t` of a ChaCha generator
/// seeded with `params.seed`, so the forest is identical however the trees
/// are scheduled.
pub fn train_forest(train: &Dataset, params: &ForestParams) -> Result<RandomForest> {
    params.validate()?;
    if train.n_rows() < 2 {
        return Err(Error::argument("random forest needs at least 2 rows"));
    }
    let sampler =
        WeightedIndex::new(train.weights()).map_err(|_| Error::argument("bootstrap needs positive total weight"))?;
    let build = |t: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(t as u64);
        let bootstrap: Vec<usize> = (0..train.n_rows()).map(|_| sampler.sample(&mut rng)).collect();
        TreeBuilder {
            ds: train,
            params,
            mtry: params.features_per_split.resolve(train.n_features()),
            rng,
            nodes: Vec::new(),
        }
        .build(bootstrap)
    };

    #[cfg(feature = "parallel")]
    let trees = {
        use rayon::prelude::*;
        (0..params.n_trees).into_par_iter().map(build).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let trees = (0..params.n_trees).map(build).collect();

    Ok(RandomForest { trees })
}

struct TreeBuilder<'a> {
    ds: &'a Dataset,
    params: &'a ForestParams,
    mtry: usize,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

/// Unnormalised Gini impurity `n * (1 - p^2 - (1-p)^2)`.
fn gini_mass(n: usize, fav: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = fav as f64 / n as f64;
    n as f64 * 2.0 * p * (1.0 - p)
}

impl TreeBuilder<'_> {
    fn build(mut self, rows: Vec<usize>) -> Tree {
        self.grow(rows, 0);
        Tree { nodes: self.nodes }
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        let fav = rows.iter().filter(|&&i| self.ds.labels()[i]).count();
        let leaf = Node::Leaf {
            favored: 2 * fav >= rows.len(),
        };
        self.nodes.push(leaf.clone());

        let n = rows.len();
        if depth >= self.params.max_depth || n < 2 * self.params.min_leaf || fav == 0 || fav == n {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows) else {
            return id;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&i| self.ds.row(i)[feature] <= threshold);
        if left_rows.is_empty() || right_rows.is_empty() {
            return id;
        }
        let left = self.grow(left_rows, depth + 1);
        let right = self.grow(right_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    fn best_split(&mut self, rows: &[usize]) -> Option<(usize, f64)> {
        let d = self.ds.n_features();
        let candidates = rand::seq::index::sample(&mut self.rng, d, self.mtry);
        let min_leaf = self.params.min_leaf;
        let n = rows.len();
        let total_fav = rows.iter().filter(|&&i| self.ds.labels()[i]).count();

        let mut best: Option<(f64, usize, f64)> = None;
        let mut column: Vec<(f64, bool)> = Vec::with_capacity(n);
        for feature in candidates.iter() {
            column.clear();
            column.extend(rows.iter().map(|&i| (self.ds.row(i)[feature], self.ds.labels()[i])));
            column.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_fav = 0;
            for split_at in 1..n {
                left_fav += column[split_at - 1].1 as usize;
                let (lo, hi) = (column[split_at - 1].0, column[split_at].0);
                if lo == hi || split_at < min_leaf || n - split_at < min_leaf {
                    continue;
                }
                let impurity = gini_mass(split_at, left_fav) + gini_mass(n - split_at, total_fav - left_fav);
                if best.is_none_or(|(b, _, _)| impurity < b) {
                    best = Some((impurity, feature, lo + (hi - lo) / 2.0));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;
    use alloc::vec;

    #[test]
    fn pure_training_set_scores_one() {
        let x = Matrix::from_rows(&[[0.1, 0.2], [0.4, 0.3], [0.9, 0.8], [0.5, 0.5]]).unwrap();
        let ds = Dataset::numeric(x, vec![true; 4], vec![true, true, false, false]).unwrap();
        let f = train_forest(&ds, &ForestParams::default()).unwrap();
        for r in [[0.0, 0.0], [1.0, 1.0], [0.3, 0.7]] {
            assert_eq!(f.score(&r), 1.0);
        }
    }

    #[test]
    fn resolves_sqrt_rule() {
        let r = FeaturesPerSplit::Rule(FeatureRule::Sqrt);
        assert_eq!(r.resolve(1), 1);
        assert_eq!(r.resolve(9), 3);
        assert_eq!(r.resolve(10), 4);
        assert_eq!(FeaturesPerSplit::Count(50).resolve(3), 3);
    }

    #[test]
    fn zero_weight_rows_are_never_drawn() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]).unwrap();
        let ds = Dataset::numeric(x, vec![true, true, false, false], vec![true; 4])
            .unwrap()
            .replace_weights(vec![1.0, 1.0, 0.0, 0.0])
            .unwrap();
        let f = train_forest(&ds, &ForestParams::default()).unwrap();
        assert_eq!(f.score(&[3.0]), 1.0);
    }
}
