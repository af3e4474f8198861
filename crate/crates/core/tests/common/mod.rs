#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use synthfair_core::{Dataset, Matrix};

/// Random numeric dataset: `d` uniform features, group and label drawn
/// with the given probabilities.
pub fn random_dataset(seed: u64, n: usize, d: usize, p_priv: f64, p_fav_priv: f64, p_fav_unpriv: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Matrix::with_cols(d);
    let mut y = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        x.push_row(&row).unwrap();
        let privileged = rng.random_bool(p_priv);
        g.push(privileged);
        y.push(rng.random_bool(if privileged { p_fav_priv } else { p_fav_unpriv }));
    }
    Dataset::numeric(x, y, g).unwrap()
}

/// `n` rows from an isotropic Gaussian centred at `mean`.
pub fn gaussian(rng: &mut ChaCha8Rng, n: usize, mean: &[f64], sd: f64) -> Matrix {
    let mut m = Matrix::with_cols(mean.len());
    for _ in 0..n {
        let row: Vec<f64> = mean
            .iter()
            .map(|&mu| Normal::new(mu, sd).unwrap().sample(rng))
            .collect();
        m.push_row(&row).unwrap();
    }
    m
}

/// Groups whose features depend on the label only: `x | y ~ N(mu_y, 1)` in
/// `d` dimensions, with favored rates `r_p` and `r_u`. Any feature shift
/// between the groups comes from their different base rates.
pub fn base_rate_artifact(seed: u64, n_per_group: usize, d: usize, r_p: f64, r_u: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fav = vec![1.5; d];
    let unfav = vec![-1.5; d];
    let mut x = Matrix::with_cols(d);
    let mut y = Vec::new();
    let mut g = Vec::new();
    for (privileged, rate) in [(true, r_p), (false, r_u)] {
        let n_fav = (rate * n_per_group as f64).round() as usize;
        for i in 0..n_per_group {
            let favored = i < n_fav;
            let row = gaussian(&mut rng, 1, if favored { &fav } else { &unfav }, 1.0);
            x.push_row(row.row(0)).unwrap();
            y.push(favored);
            g.push(privileged);
        }
    }
    Dataset::numeric(x, y, g).unwrap()
}
