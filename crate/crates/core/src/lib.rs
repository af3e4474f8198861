//! Group-targeted synthetic oversampling for fairness-aware binary
//! classification.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its inputs and an explicit seed; file formats, CSV ingestion and the CLI
//! live in the `synthfair` companion crate.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`tabular`] | schema, encoding, min-max scaling, stratified split, cell counts |
//! | [`oversample`] | SMOTE interpolation and the three group-targeted strategies |
//! | [`models`] | weighted logistic regression and a Gini random forest |
//! | [`fairmetrics`] | group confusion tables and the fairness metric battery |
//! | [`divergence`] | proxy-A-distance estimate of the H-divergence and bound terms |
//! | [`mitigators`] | reweighing and reject-option classification |
//! | [`stats`] | summary statistics and the paired Student t-test |
//! | [`harness`] | seeded experiment arms, threshold sweeps, summaries |
//!
//! With the `parallel` feature (implies `std`) forest training fans out over
//! trees with rayon. Output never depends on scheduling.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod divergence;
pub mod error;
pub mod fairmetrics;
pub mod harness;
pub mod matrix;
pub mod mitigators;
pub mod models;
pub mod oversample;
pub mod stats;
pub mod tabular;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use tabular::{Cell, CellCounts, Dataset};
