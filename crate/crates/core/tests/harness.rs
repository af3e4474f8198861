mod common;

use synthfair_core::divergence::dataset_bounds;
use synthfair_core::fairmetrics::{balanced_accuracy_threshold, threshold_sweep};
use synthfair_core::harness::{default_thresholds, run_arm, run_experiment, summarize, Arm, Metric, ProtocolConfig};
use synthfair_core::models::{Classifier, ForestParams};
use synthfair_core::oversample::Strategy;
use synthfair_core::tabular::{split, MinMaxScaler};
use synthfair_core::{Dataset, Error};

fn fixture() -> Dataset {
    common::base_rate_artifact(7, 150, 3, 0.7, 0.35)
}

const OVERSAMPLE: Arm = Arm::Oversample {
    strategy: Strategy::ExpandUnprivilegedFavored,
};

#[test]
fn baseline_is_the_manual_pipeline() {
    let ds = fixture();
    let protocol = ProtocolConfig::default();
    let run = run_arm(&ds, &protocol, Arm::Baseline, 3).unwrap();

    let parts = split(&ds, 0.3, 3).unwrap();
    let scaler = MinMaxScaler::fit(&parts.train);
    let train = scaler.transform(parts.train.clone()).unwrap();
    let test = scaler.transform(parts.test.clone()).unwrap();
    let model = Classifier::default().train(&train, 3).unwrap();
    let scores = model.scores(test.features());
    let sweep = threshold_sweep(&scores, test.labels(), test.groups(), &default_thresholds()).unwrap();
    let t = balanced_accuracy_threshold(&sweep).unwrap();

    assert_eq!(run.split_fingerprint, parts.fingerprint());
    assert_eq!(run.operating_threshold, t);
    assert_eq!(run.sweep.len(), sweep.len());
    for (a, (u, r)) in run.sweep.iter().zip(&sweep) {
        assert_eq!((a.threshold, a.report), (*u, *r));
    }
    assert_eq!(run.divergence, dataset_bounds(&train, 0.05, 3).unwrap());
    assert_eq!(run.n_synthetic, 0);
}

#[test]
fn oversample_with_equal_rates_is_baseline() {
    let ds = common::base_rate_artifact(8, 100, 2, 0.5, 0.5);
    let protocol = ProtocolConfig::default();
    for seed in 0..3 {
        let base = run_arm(&ds, &protocol, Arm::Baseline, seed).unwrap();
        let over = run_arm(&ds, &protocol, OVERSAMPLE, seed).unwrap();
        assert_eq!(over.n_synthetic, 0);
        assert_eq!(over.sweep, base.sweep);
        assert_eq!(over.divergence, base.divergence);
    }
}

#[test]
fn arms_share_splits_per_seed() {
    let ds = fixture();
    let protocol = ProtocolConfig::default();
    for seed in [0, 1, 42] {
        let fps: Vec<u64> = [Arm::Baseline, OVERSAMPLE, Arm::Reweigh, Arm::RejectOption]
            .into_iter()
            .map(|a| run_arm(&ds, &protocol, a, seed).unwrap().split_fingerprint)
            .collect();
        assert!(fps.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn reject_option_arm_records_margin() {
    let run = run_arm(&fixture(), &ProtocolConfig::default(), Arm::RejectOption, 2).unwrap();
    let m = run.reject_margin.unwrap();
    assert!([0.05, 0.1, 0.15, 0.2].contains(&m));
}

#[test]
fn errors_carry_arm_and_seed() {
    // Two rows per group leave too little for the divergence estimate.
    let ds = common::random_dataset(1, 8, 1, 0.5, 0.5, 0.5);
    let err = run_arm(&ds, &ProtocolConfig::default(), Arm::Reweigh, 9).unwrap_err();
    match err {
        Error::Arm { arm, seed, .. } => assert_eq!((arm.as_str(), seed), ("reweigh", 9)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn summary_statistics_and_pairing() {
    let ds = fixture();
    let protocol = ProtocolConfig::default();
    let arms = [Arm::Baseline, OVERSAMPLE];
    let seeds = [0, 1, 2, 3];
    let s = run_experiment(&ds, &protocol, &arms, &seeds).unwrap();
    assert_eq!(s.n_runs, 4);
    for a in &s.arms {
        let di = a.metric(Metric::DiMeasure);
        assert_eq!(di.values.len(), 4);
        let defined: Vec<f64> = di.values.iter().flatten().copied().collect();
        let mean = defined.iter().sum::<f64>() / defined.len() as f64;
        assert!((di.mean.unwrap() - mean).abs() < 1e-12);
        assert_eq!(a.sweep.len(), 51);
    }
    assert_eq!(s.t_tests.len(), 7);
    assert_eq!(run_experiment(&ds, &protocol, &arms, &seeds).unwrap(), s);

    // Dropping a run breaks pairing.
    let mut runs: Vec<_> = arms
        .iter()
        .flat_map(|&a| seeds.iter().map(move |&x| (a, x)))
        .map(|(a, x)| run_arm(&ds, &protocol, a, x).unwrap())
        .collect();
    let shuffled = {
        let mut r = runs.clone();
        r.reverse();
        r
    };
    assert_eq!(summarize(&arms, shuffled).unwrap(), s);
    runs.pop();
    assert!(matches!(summarize(&arms, runs), Err(Error::Pairing(_))));
}

#[test]
fn single_run_has_zero_stderr_and_no_tests() {
    let s = run_experiment(
        &fixture(),
        &ProtocolConfig::default(),
        &[Arm::Baseline, Arm::Reweigh],
        &[5],
    )
    .unwrap();
    assert!(s.t_tests.is_empty());
    for a in &s.arms {
        assert_eq!(a.metric(Metric::Accuracy).standard_error, Some(0.0));
    }
}

#[test]
fn forest_arm_runs() {
    let protocol = ProtocolConfig {
        classifier: Classifier::Forest(ForestParams {
            n_trees: 15,
            ..Default::default()
        }),
        ..Default::default()
    };
    let a = run_arm(&fixture(), &protocol, Arm::Baseline, 1).unwrap();
    let b = run_arm(&fixture(), &protocol, Arm::Baseline, 1).unwrap();
    assert_eq!(a, b);
}
