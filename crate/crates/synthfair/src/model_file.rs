use std::path::Path;

use serde::{Deserialize, Serialize};
use synthfair_core::models::Model;
use synthfair_core::tabular::{Encoding, MinMaxScaler, RawTable};
use synthfair_core::Dataset;

use crate::error::AppResult;
use crate::io;

/// A trained model with the encoding and scaling it expects, so new CSV
/// files can be scored without the training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub encoding: Encoding,
    pub scaler: MinMaxScaler,
    pub model: Model,
}

impl ModelFile {
    pub fn save(&self, path: &Path) -> AppResult<()> {
        io::write_json(path, self)
    }

    pub fn load(path: &Path) -> AppResult<Self> {
        io::read_json(path)
    }

    /// Encodes and scales `table` the way the training data was.
    pub fn prepare(&self, table: &RawTable) -> AppResult<Dataset> {
        let raw = self.encoding.encode(table)?;
        Ok(self.scaler.transform(raw)?)
    }
}
