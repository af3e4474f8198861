//! File formats, the experiment runner and the `synthfair` command line
//! for [`synthfair_core`].
//!
//! * CSV input with a TOML schema ([`io::read_schema`], [`io::load_csv`]);
//! * augmented CSV plus plan JSON from `debias` ([`debias`]);
//! * model JSON carrying its encoding and scaler ([`model_file`]);
//! * TOML experiment configs producing a summary JSON and per-arm sweep
//!   CSVs ([`experiment`]);
//! * the bundled biased fixture generator ([`synthetic`]).

pub mod cli;
pub mod debias;
pub mod error;
pub mod experiment;
pub mod io;
pub mod model_file;
pub mod synthetic;

pub use error::{AppError, AppResult};
pub use synthfair_core as core;
