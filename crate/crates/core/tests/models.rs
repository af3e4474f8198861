mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use synthfair_core::models::{
    logistic_gradient, logistic_objective, predict, train_forest, train_logreg, Classifier, ForestParams, LogRegParams,
};
use synthfair_core::{Dataset, Matrix};

fn small_instance(seed: u64, n: usize, d: usize) -> (Dataset, Vec<f64>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ds = common::random_dataset(seed, n, d, 0.5, 0.6, 0.4);
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
    let coef: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    (ds.replace_weights(w).unwrap(), coef, rng.random_range(-1.0..1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_matches_central_differences(seed in any::<u64>(), n in 2usize..30, d in 1usize..5, l2 in 0.0f64..0.1) {
        let (ds, coef, b) = small_instance(seed, n, d);
        let grad = logistic_gradient(&ds, l2, &coef, b).unwrap();
        let h = 1e-6;
        let f = |c: &[f64], b: f64| logistic_objective(&ds, l2, c, b).unwrap();
        let check = |analytic: f64, numeric: f64| (analytic - numeric).abs() <= 1e-5 * analytic.abs().max(numeric.abs()).max(1e-3);

        for j in 0..d {
            let (mut up, mut down) = (coef.clone(), coef.clone());
            up[j] += h;
            down[j] -= h;
            let numeric = (f(&up, b) - f(&down, b)) / (2.0 * h);
            prop_assert!(check(grad.coefficients[j], numeric), "coef {}: {} vs {}", j, grad.coefficients[j], numeric);
        }
        let numeric = (f(&coef, b + h) - f(&coef, b - h)) / (2.0 * h);
        prop_assert!(check(grad.intercept, numeric));
    }

    #[test]
    fn integer_weights_equal_replication(seed in any::<u64>(), n in 2usize..20, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let ds = common::random_dataset(seed, n, d, 0.5, 0.6, 0.3);
        let reps: Vec<usize> = (0..n).map(|_| rng.random_range(1..4)).collect();

        let weighted = ds.clone().replace_weights(reps.iter().map(|&r| r as f64).collect()).unwrap();
        let idx: Vec<usize> = reps.iter().enumerate().flat_map(|(i, &r)| std::iter::repeat_n(i, r)).collect();
        let replicated = ds.subset(&idx).unwrap();

        let coef: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = logistic_objective(&weighted, 1e-3, &coef, 0.3).unwrap();
        let b = logistic_objective(&replicated, 1e-3, &coef, 0.3).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn separable_line_is_ordered() {
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for _ in 0..10 {
        rows.push([0.0]);
        y.push(false);
        rows.push([1.0]);
        y.push(true);
    }
    let ds = Dataset::numeric(Matrix::from_rows(&rows).unwrap(), y, vec![true; 20]).unwrap();
    let m = train_logreg(&ds, &LogRegParams::default()).unwrap();
    assert!(m.score(&[0.0]) < 0.5 && 0.5 < m.score(&[1.0]));
}

#[test]
fn gradient_norm_at_solution_is_small_or_flagged() {
    let ds = common::random_dataset(4, 200, 3, 0.5, 0.7, 0.3);
    for params in [
        LogRegParams::default(),
        LogRegParams {
            max_iters: 5,
            ..Default::default()
        },
    ] {
        let m = train_logreg(&ds, &params).unwrap();
        let g = logistic_gradient(&ds, params.l2, &m.coefficients, m.intercept).unwrap();
        if m.fit.converged {
            assert!(g.norm() <= params.tol);
        } else {
            assert_eq!(m.fit.iterations, params.max_iters);
        }
    }
}

#[test]
fn doubled_weights_reach_the_same_fit() {
    let ds = common::random_dataset(8, 120, 2, 0.5, 0.7, 0.3);
    let doubled = ds.clone().replace_weights(vec![2.0; ds.n_rows()]).unwrap();
    let p = LogRegParams::default();
    let a = train_logreg(&ds, &p).unwrap();
    let b = train_logreg(&doubled, &p).unwrap();
    for (x, z) in a.coefficients.iter().zip(&b.coefficients) {
        assert!((x - z).abs() < 1e-9);
    }
}

fn xor(n_per_quadrant: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Matrix::with_cols(2);
    let mut y = Vec::new();
    for (cx, cy) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
        for _ in 0..n_per_quadrant {
            x.push_row(&[cx + rng.random_range(-0.3..0.3), cy + rng.random_range(-0.3..0.3)])
                .unwrap();
            y.push((cx == 1.0) != (cy == 1.0));
        }
    }
    let g = (0..y.len()).map(|i| i % 2 == 0).collect();
    Dataset::numeric(x, y, g).unwrap()
}

#[test]
fn forest_learns_xor() {
    let ds = xor(50, 1);
    let params = ForestParams {
        n_trees: 100,
        max_depth: 4,
        seed: 11,
        ..Default::default()
    };
    let f = train_forest(&ds, &params).unwrap();
    let correct = ds
        .features()
        .iter_rows()
        .zip(ds.labels())
        .filter(|(r, &y)| (f.score(r) >= 0.5) == y)
        .count();
    assert!(correct as f64 / ds.n_rows() as f64 >= 0.9);
}

#[test]
fn forest_scores_are_vote_fractions_and_reproducible() {
    let ds = common::random_dataset(3, 150, 4, 0.5, 0.6, 0.3);
    let params = ForestParams {
        n_trees: 37,
        seed: 5,
        ..Default::default()
    };
    let a = train_forest(&ds, &params).unwrap();
    let b = train_forest(&ds, &params).unwrap();
    assert_eq!(a, b);
    for row in ds.features().iter_rows() {
        let s = a.score(row);
        let votes = s * 37.0;
        assert!((votes - votes.round()).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&s));
    }
}

#[test]
fn classifier_enum_threads_the_seed() {
    let ds = common::random_dataset(2, 80, 2, 0.5, 0.6, 0.3);
    let c = Classifier::Forest(ForestParams {
        n_trees: 10,
        ..Default::default()
    });
    let a = c.train(&ds, 1).unwrap();
    let b = c.train(&ds, 1).unwrap();
    assert_eq!(a.scores(ds.features()), b.scores(ds.features()));
    assert_eq!(predict(&a, ds.features(), 0.0), vec![true; ds.n_rows()]);
}

#[test]
fn single_class_fit_scores_above_half() {
    let ds = Dataset::numeric(
        Matrix::from_rows(&[[0.1], [0.5], [0.9], [0.3]]).unwrap(),
        vec![true; 4],
        vec![true, false, true, false],
    )
    .unwrap();
    let m = train_logreg(&ds, &LogRegParams::default()).unwrap();
    for x in [0.0, 0.4, 1.0] {
        assert!(m.score(&[x]) > 0.5);
    }
}
