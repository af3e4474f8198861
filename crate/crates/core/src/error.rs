use alloc::boxed::Box;
use alloc::string::String;

use thiserror::Error;

use crate::tabular::Cell;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("schema error: column `{column}`: {reason}")]
    Schema { column: String, reason: String },

    #[error("parse error: line {line}, column `{column}`: cannot parse `{value}` as a finite number")]
    Parse { line: usize, column: String, value: String },

    #[error("missing value: line {line}, column `{column}`")]
    MissingValue { line: usize, column: String },

    #[error("cardinality error: column `{column}` has {count} distinct values, expected exactly 2")]
    Cardinality { column: String, count: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("argument error: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unreachable target: {0}")]
    UnreachableTarget(String),

    #[error("insufficient support: cell {cell} has {count} member(s), at least 2 are needed")]
    InsufficientSupport { cell: Cell, count: usize },

    #[error("training diverged: non-finite loss at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("insufficient sample: {side} has {rows} row(s), at least {required} are needed")]
    InsufficientSample {
        side: &'static str,
        rows: usize,
        required: usize,
    },

    #[error("undefined weight: cell {0} is empty")]
    UndefinedWeight(Cell),

    #[error("degenerate variance: all paired differences are identical")]
    DegenerateVariance,

    #[error("pairing error: {0}")]
    Pairing(String),

    #[error("arm `{arm}`, seed {seed}: {source}")]
    Arm { arm: String, seed: u64, source: Box<Error> },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Strips any `Arm` annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::Arm { source, .. } => source.root(),
            other => other,
        }
    }
}
