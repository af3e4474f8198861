use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
}

/// Column kinds plus which raw values mean "favored" and "privileged".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub columns: Vec<ColumnSpec>,
    pub label_column: String,
    pub favorable_value: String,
    pub protected_column: String,
    pub privileged_value: String,
}

impl Schema {
    pub fn validate(&self) -> Result<()> {
        for (what, name) in [("label", &self.label_column), ("protected", &self.protected_column)] {
            if !self.columns.iter().any(|c| &c.name == name) {
                return Err(Error::Schema {
                    column: name.clone(),
                    reason: alloc::format!("{what} column is not declared among the columns"),
                });
            }
        }
        if self.label_column == self.protected_column {
            return Err(Error::Schema {
                column: self.label_column.clone(),
                reason: "label and protected column must differ".into(),
            });
        }
        for (i, c) in self.columns.iter().enumerate() {
            if self.columns[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::Schema {
                    column: c.name.clone(),
                    reason: "declared twice".into(),
                });
            }
        }
        Ok(())
    }

    /// Columns that become model features, in declaration order.
    pub fn feature_columns(&self) -> impl Iterator<Item = &ColumnSpec> + '_ {
        self.columns
            .iter()
            .filter(move |c| c.name != self.label_column && c.name != self.protected_column)
    }
}
