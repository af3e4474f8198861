//! Reading and writing CSV, TOML and JSON files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use synthfair_core::fairmetrics::FairnessReport;
use synthfair_core::harness::SweepRow;
use synthfair_core::tabular::{Encoding, MinMaxScaler, RawRecord, RawTable, Schema};
use synthfair_core::{Dataset, Error};

use crate::error::{AppError, AppResult};

pub fn read_to_string(path: &Path) -> AppResult<String> {
    fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

pub fn write_string(path: &Path, contents: &str) -> AppResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| AppError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Reads a CSV file with a header row. Record line numbers count the
/// header as line 1.
pub fn read_table(path: &Path) -> AppResult<RawTable> {
    let file = fs::File::open(path).map_err(|e| AppError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let csv_err = |e: csv::Error| AppError::Csv {
        path: path.to_path_buf(),
        message: crate::error::single_line(&e.to_string()),
    };
    let headers: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyInput.into());
    }
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(records.len() + 2, |p| p.line() as usize);
        records.push(RawRecord {
            line,
            fields: rec.iter().map(str::to_string).collect(),
        });
    }
    Ok(RawTable { headers, records })
}

pub fn read_schema(path: &Path) -> AppResult<Schema> {
    let schema: Schema = toml::from_str(&read_to_string(path)?).map_err(|e| AppError::config(path, e))?;
    schema.validate()?;
    Ok(schema)
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> AppResult<T> {
    toml::from_str(&read_to_string(path)?).map_err(|e| AppError::config(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> AppResult<T> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| AppError::config(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> AppResult<()> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    write_string(path, &s)
}

/// A CSV file and its schema, encoded and min-max scaled over all rows.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub table: RawTable,
    pub encoding: Encoding,
    pub scaler: MinMaxScaler,
    pub dataset: Dataset,
}

pub fn load_csv(data: &Path, schema: &Schema) -> AppResult<Loaded> {
    let table = read_table(data)?;
    let encoding = Encoding::fit(schema, &table)?;
    let raw = encoding.encode(&table)?;
    let scaler = MinMaxScaler::fit(&raw);
    let dataset = scaler.transform(raw)?;
    Ok(Loaded {
        table,
        encoding,
        scaler,
        dataset,
    })
}

pub fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(buf)
}

pub fn write_rows(path: &Path, headers: &[String], rows: &[Vec<String>]) -> AppResult<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        let io = |e: csv::Error| AppError::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        w.write_record(headers).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush().map_err(|e| AppError::io(path, e))?;
    }
    write_string(path, &String::from_utf8(buf).expect("utf-8 input"))
}

pub const SWEEP_COLUMNS: [&str; 8] = [
    "threshold",
    "accuracy",
    "balanced_accuracy",
    "di",
    "AOD",
    "SPD",
    "EOD",
    "Theil",
];

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn sweep_row(threshold: f64, r: &FairnessReport) -> SweepRow {
    SweepRow {
        threshold,
        accuracy: Some(r.accuracy),
        balanced_accuracy: r.balanced_accuracy,
        di: r.di_measure,
        aod: r.average_odds_difference,
        spd: r.statistical_parity_difference,
        eod: r.equal_opportunity_difference,
        theil: r.theil_index,
    }
}

/// Per-threshold metrics; undefined values are written as `NA`.
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> AppResult<()> {
    let headers: Vec<String> = SWEEP_COLUMNS.iter().map(|s| s.to_string()).collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.threshold.to_string(),
                cell(r.accuracy),
                cell(r.balanced_accuracy),
                cell(r.di),
                cell(r.aod),
                cell(r.spd),
                cell(r.eod),
                cell(r.theil),
            ]
        })
        .collect();
    write_rows(path, &headers, &body)
}
