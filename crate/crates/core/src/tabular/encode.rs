use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{BlockKind, ColumnKind, Dataset, FeatureLayout, MinMaxScaler, Schema};
use crate::error::{Error, Result};
use crate::Matrix;

/// One data line of a delimited file. `line` is 1-based and counts the
/// header, so the first record is usually line 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub line: usize,
    pub fields: Vec<String>,
}

/// Header plus string records, as read from a CSV file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub records: Vec<RawRecord>,
}

impl RawTable {
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema {
                column: name.to_string(),
                reason: "not found in header".into(),
            })
    }
}

/// A fitted schema encoding: category vocabularies fixed at fit time plus
/// the two raw values of the label and protected columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoding {
    schema: Schema,
    layout: FeatureLayout,
    unfavorable_value: String,
    unprivileged_value: String,
}

fn field<'a>(rec: &'a RawRecord, idx: usize, column: &str) -> Result<&'a str> {
    let v = rec.fields.get(idx).map(|s| s.trim()).unwrap_or("");
    if v.is_empty() {
        return Err(Error::MissingValue {
            line: rec.line,
            column: column.to_string(),
        });
    }
    Ok(v)
}

/// Distinct values in first-appearance order.
fn distinct(table: &RawTable, idx: usize, column: &str) -> Result<Vec<String>> {
    let mut seen: Vec<String> = Vec::new();
    for rec in &table.records {
        let v = field(rec, idx, column)?;
        if !seen.iter().any(|s| s == v) {
            seen.push(v.to_string());
        }
    }
    Ok(seen)
}

fn binary_column(table: &RawTable, column: &str, positive: &str) -> Result<String> {
    let idx = table.column_index(column)?;
    let values = distinct(table, idx, column)?;
    if values.len() != 2 {
        return Err(Error::Cardinality {
            column: column.to_string(),
            count: values.len(),
        });
    }
    if !values.iter().any(|v| v == positive) {
        return Err(Error::Schema {
            column: column.to_string(),
            reason: format!("value `{positive}` does not occur in the data"),
        });
    }
    Ok(values.into_iter().find(|v| v != positive).unwrap())
}

impl Encoding {
    pub fn fit(schema: &Schema, table: &RawTable) -> Result<Self> {
        schema.validate()?;
        if table.records.is_empty() {
            return Err(Error::EmptyInput);
        }
        for c in &schema.columns {
            table.column_index(&c.name)?;
        }
        let unfavorable_value = binary_column(table, &schema.label_column, &schema.favorable_value)?;
        let unprivileged_value = binary_column(table, &schema.protected_column, &schema.privileged_value)?;

        let mut layout = FeatureLayout::new();
        for c in schema.feature_columns() {
            match c.kind {
                ColumnKind::Numeric => layout.push_numeric(c.name.clone()),
                ColumnKind::Categorical => {
                    let idx = table.column_index(&c.name)?;
                    layout.push_one_hot(c.name.clone(), distinct(table, idx, &c.name)?);
                }
            }
        }
        Ok(Self {
            schema: schema.clone(),
            layout,
            unfavorable_value,
            unprivileged_value,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    pub fn label_value(&self, favored: bool) -> &str {
        if favored {
            &self.schema.favorable_value
        } else {
            &self.unfavorable_value
        }
    }

    pub fn group_value(&self, privileged: bool) -> &str {
        if privileged {
            &self.schema.privileged_value
        } else {
            &self.unprivileged_value
        }
    }

    /// Encodes `table` with raw (unscaled) numeric values. Categories not in
    /// the fitted vocabulary encode as an all-zero block.
    pub fn encode(&self, table: &RawTable) -> Result<Dataset> {
        if table.records.is_empty() {
            return Err(Error::EmptyInput);
        }
        let label_idx = table.column_index(&self.schema.label_column)?;
        let group_idx = table.column_index(&self.schema.protected_column)?;
        let block_idx = self
            .layout
            .blocks()
            .iter()
            .map(|b| table.column_index(&b.name))
            .collect::<Result<Vec<_>>>()?;

        let d = self.layout.width();
        let mut x = Matrix::with_cols(d);
        let mut labels = Vec::with_capacity(table.records.len());
        let mut groups = Vec::with_capacity(table.records.len());
        let mut row = alloc::vec![0.0; d];
        for rec in &table.records {
            row.iter_mut().for_each(|v| *v = 0.0);
            for (block, &idx) in self.layout.blocks().iter().zip(&block_idx) {
                let raw = field(rec, idx, &block.name)?;
                match &block.kind {
                    BlockKind::Numeric => {
                        let v: f64 = raw
                            .parse()
                            .ok()
                            .filter(|v: &f64| v.is_finite())
                            .ok_or_else(|| Error::Parse {
                                line: rec.line,
                                column: block.name.clone(),
                                value: raw.to_string(),
                            })?;
                        row[block.offset] = v;
                    }
                    BlockKind::OneHot { categories } => {
                        if let Some(k) = categories.iter().position(|c| c == raw) {
                            row[block.offset + k] = 1.0;
                        }
                    }
                }
            }
            x.push_row(&row)?;
            labels.push(self.binary_value(rec, label_idx, &self.schema.label_column, true)?);
            groups.push(self.binary_value(rec, group_idx, &self.schema.protected_column, false)?);
        }
        Dataset::new(x, labels, groups, self.layout.clone())
    }

    fn binary_value(&self, rec: &RawRecord, idx: usize, column: &str, is_label: bool) -> Result<bool> {
        let v = field(rec, idx, column)?;
        let (pos, neg) = if is_label {
            (&self.schema.favorable_value, &self.unfavorable_value)
        } else {
            (&self.schema.privileged_value, &self.unprivileged_value)
        };
        if v == pos {
            Ok(true)
        } else if v == neg {
            Ok(false)
        } else {
            Err(Error::Cardinality {
                column: column.to_string(),
                count: 3,
            })
        }
    }

    /// Maps an encoded row back to raw strings for every feature column, in
    /// schema order. `scaler` undoes min-max scaling of numeric columns.
    pub fn decode_features(&self, row: &[f64], scaler: Option<&MinMaxScaler>) -> Vec<(String, String)> {
        self.layout
            .blocks()
            .iter()
            .map(|b| {
                let value = match &b.kind {
                    BlockKind::Numeric => {
                        let v = row[b.offset];
                        let v = scaler.map_or(v, |s| s.inverse(b.offset, v));
                        format!("{v}")
                    }
                    BlockKind::OneHot { categories } => row[b.range()]
                        .iter()
                        .position(|&v| v == 1.0)
                        .map(|k| categories[k].clone())
                        .unwrap_or_default(),
                };
                (b.name.clone(), value)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tabular::ColumnSpec;
    use alloc::vec;

    fn table(headers: &[&str], rows: &[&[&str]]) -> RawTable {
        RawTable {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            records: rows
                .iter()
                .enumerate()
                .map(|(i, r)| RawRecord {
                    line: i + 2,
                    fields: r.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }

    fn schema(cols: &[(&str, ColumnKind)]) -> Schema {
        Schema {
            columns: cols
                .iter()
                .map(|(n, k)| ColumnSpec {
                    name: n.to_string(),
                    kind: *k,
                })
                .collect(),
            label_column: "y".into(),
            favorable_value: "yes".into(),
            protected_column: "g".into(),
            privileged_value: "p".into(),
        }
    }

    use ColumnKind::*;

    #[test]
    fn one_hot_first_appearance_order() {
        let t = table(
            &["c", "y", "g"],
            &[&["a", "yes", "p"], &["b", "no", "u"], &["a", "no", "p"]],
        );
        let s = schema(&[("c", Categorical), ("y", Categorical), ("g", Categorical)]);
        let enc = Encoding::fit(&s, &t).unwrap();
        let ds = enc.encode(&t).unwrap();
        assert_eq!(ds.row(0), &[1.0, 0.0]);
        assert_eq!(ds.row(1), &[0.0, 1.0]);
        assert_eq!(ds.row(2), &[1.0, 0.0]);
        assert_eq!(ds.labels(), &[true, false, false]);
        assert_eq!(ds.groups(), &[true, false, true]);
    }

    #[test]
    fn unseen_category_is_zero_block() {
        let fit = table(&["c", "y", "g"], &[&["a", "yes", "p"], &["b", "no", "u"]]);
        let s = schema(&[("c", Categorical), ("y", Categorical), ("g", Categorical)]);
        let enc = Encoding::fit(&s, &fit).unwrap();
        let other = table(&["c", "y", "g"], &[&["z", "yes", "u"]]);
        assert_eq!(enc.encode(&other).unwrap().row(0), &[0.0, 0.0]);
    }

    #[test]
    fn parse_error_names_line() {
        let t = table(&["x", "y", "g"], &[&["1", "yes", "p"], &["oops", "no", "u"]]);
        let s = schema(&[("x", Numeric), ("y", Categorical), ("g", Categorical)]);
        let enc = Encoding::fit(&s, &t).unwrap();
        assert_eq!(
            enc.encode(&t),
            Err(Error::Parse {
                line: 3,
                column: "x".into(),
                value: "oops".into()
            })
        );
    }

    #[test]
    fn missing_column_and_value() {
        let t = table(&["x", "y"], &[&["1", "yes"]]);
        let s = schema(&[("x", Numeric), ("y", Categorical), ("g", Categorical)]);
        assert!(matches!(Encoding::fit(&s, &t), Err(Error::Schema { column, .. }) if column == "g"));

        let t = table(&["x", "y", "g"], &[&["", "yes", "p"], &["2", "no", "u"]]);
        let s = schema(&[("x", Numeric), ("y", Categorical), ("g", Categorical)]);
        let enc = Encoding::fit(&s, &t).unwrap();
        assert_eq!(
            enc.encode(&t),
            Err(Error::MissingValue {
                line: 2,
                column: "x".into()
            })
        );
    }

    #[test]
    fn label_cardinality() {
        let t = table(&["y", "g"], &[&["yes", "p"], &["no", "u"], &["maybe", "u"]]);
        let s = schema(&[("y", Categorical), ("g", Categorical)]);
        assert_eq!(
            Encoding::fit(&s, &t),
            Err(Error::Cardinality {
                column: "y".into(),
                count: 3
            })
        );
    }

    #[test]
    fn empty_table() {
        let t = table(&["y", "g"], &[]);
        let s = schema(&[("y", Categorical), ("g", Categorical)]);
        assert_eq!(Encoding::fit(&s, &t), Err(Error::EmptyInput));
    }

    #[test]
    fn decode_round_trips_categories() {
        let t = table(
            &["c", "x", "y", "g"],
            &[&["a", "3", "yes", "p"], &["b", "5", "no", "u"]],
        );
        let s = schema(&[
            ("c", Categorical),
            ("x", Numeric),
            ("y", Categorical),
            ("g", Categorical),
        ]);
        let enc = Encoding::fit(&s, &t).unwrap();
        let ds = enc.encode(&t).unwrap();
        let scaler = MinMaxScaler::fit(&ds);
        let scaled = scaler.transform(ds).unwrap();
        let decoded = enc.decode_features(scaled.row(1), Some(&scaler));
        assert_eq!(decoded, vec![("c".into(), "b".into()), ("x".into(), "5".into())]);
        assert_eq!(enc.label_value(false), "no");
        assert_eq!(enc.group_value(false), "u");
    }
}
