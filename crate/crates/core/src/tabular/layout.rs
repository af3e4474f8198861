use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockKind {
    Numeric,
    OneHot { categories: Vec<String> },
}

/// A contiguous run of encoded feature columns that came from one source
/// column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBlock {
    pub name: String,
    pub offset: usize,
    #[serde(flatten)]
    pub kind: BlockKind,
}

impl FeatureBlock {
    pub fn width(&self) -> usize {
        match &self.kind {
            BlockKind::Numeric => 1,
            BlockKind::OneHot { categories } => categories.len(),
        }
    }

    pub fn range(&self) -> core::ops::Range<usize> {
        self.offset..self.offset + self.width()
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, BlockKind::Numeric)
    }
}

/// Mapping from encoded feature columns back to source columns.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureLayout {
    blocks: Vec<FeatureBlock>,
}

impl FeatureLayout {
    pub fn new() -> Self {
        Self::default()
    }

    /// `d` numeric columns named `x0..x{d-1}`.
    pub fn all_numeric(d: usize) -> Self {
        let mut layout = Self::new();
        for j in 0..d {
            layout.push_numeric(format!("x{j}"));
        }
        layout
    }

    pub fn push_numeric(&mut self, name: impl Into<String>) {
        let offset = self.width();
        self.blocks.push(FeatureBlock {
            name: name.into(),
            offset,
            kind: BlockKind::Numeric,
        });
    }

    pub fn push_one_hot(&mut self, name: impl Into<String>, categories: Vec<String>) {
        let offset = self.width();
        self.blocks.push(FeatureBlock {
            name: name.into(),
            offset,
            kind: BlockKind::OneHot { categories },
        });
    }

    pub fn blocks(&self) -> &[FeatureBlock] {
        &self.blocks
    }

    pub fn width(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.offset + b.width())
    }

    /// Per-column names; one-hot columns are `column=category`.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.width());
        for b in &self.blocks {
            match &b.kind {
                BlockKind::Numeric => names.push(b.name.clone()),
                BlockKind::OneHot { categories } => {
                    names.extend(categories.iter().map(|c| format!("{}={}", b.name, c)))
                }
            }
        }
        names
    }

    /// Flags which encoded columns are numeric.
    pub fn numeric_mask(&self) -> Vec<bool> {
        let mut mask = alloc::vec![false; self.width()];
        for b in self.blocks.iter().filter(|b| b.is_numeric()) {
            mask[b.offset] = true;
        }
        mask
    }
}
