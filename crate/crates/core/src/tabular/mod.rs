//! Dataset representation, ingestion from raw string tables, scaling,
//! stratified splitting and (group, label) cell accounting.

mod cells;
mod dataset;
mod encode;
mod layout;
mod scale;
mod schema;
mod split;

pub use cells::{cell_counts, Cell, CellCounts};
pub use dataset::Dataset;
pub use encode::{Encoding, RawRecord, RawTable};
pub use layout::{BlockKind, FeatureBlock, FeatureLayout};
pub use scale::MinMaxScaler;
pub use schema::{ColumnKind, ColumnSpec, Schema};
pub use split::{split, split_test_size, Split};
