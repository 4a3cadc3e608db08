//! Reading and writing `(y, value, status)` datasets as CSV.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use censcov_core::{CensoredDataset, Observation};

use crate::error::{CliError, CliResult};

/// Column names of the three dataset fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Columns {
    pub y: String,
    pub value: String,
    pub status: String,
}

impl Columns {
    pub fn new(y: &str, value: &str, status: &str) -> Self {
        Self {
            y: y.to_string(),
            value: value.to_string(),
            status: status.to_string(),
        }
    }
}

pub fn parse_dataset_csv(path: &Path, columns: &Columns) -> CliResult<CensoredDataset> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_dataset_reader(file, columns)
}

fn parse_number(cell: &str, row: usize, column: &str) -> CliResult<f64> {
    let bad = |reason: String| CliError::Parse {
        row,
        line: row + 1,
        reason,
    };
    let v: f64 = cell
        .parse()
        .map_err(|_| bad(format!("column '{column}': '{cell}' is not a number")))?;
    if !v.is_finite() {
        return Err(bad(format!("column '{column}': '{cell}' is not finite")));
    }
    Ok(v)
}

/// Parses CSV with a header row. Data rows are numbered from 1; the line
/// number in errors counts the header.
pub fn parse_dataset_reader<R: Read>(reader: R, columns: &Columns) -> CliResult<CensoredDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Schema(format!("unreadable header: {e}")))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(CliError::Schema("empty file: no header row".into()));
    }
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Schema(format!("missing column '{name}'")))
    };
    let iy = find(&columns.y)?;
    let iv = find(&columns.value)?;
    let is = find(&columns.status)?;

    let mut records = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| CliError::Parse {
            row,
            line: row + 1,
            reason: e.to_string(),
        })?;
        let cell = |i: usize| rec.get(i).unwrap_or("");
        let y = parse_number(cell(iy), row, &columns.y)?;
        let v = parse_number(cell(iv), row, &columns.value)?;
        let delta = match cell(is) {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(CliError::Parse {
                    row,
                    line: row + 1,
                    reason: format!(
                        "column '{}': status must be 0 or 1, got '{other}'",
                        columns.status
                    ),
                })
            }
        };
        records.push(Observation { y, v, delta });
    }
    if records.is_empty() {
        return Err(CliError::Schema(
            "file has a header but no data rows".into(),
        ));
    }
    Ok(CensoredDataset::new(records)?)
}

/// Writes a dataset with shortest round-trip float formatting, so reading it
/// back reproduces every value exactly.
pub fn write_dataset<W: Write>(
    writer: W,
    ds: &CensoredDataset,
    columns: &Columns,
) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| CliError::Usage(format!("cannot write CSV: {e}"));
    w.write_record([&columns.y, &columns.value, &columns.status])
        .map_err(io)?;
    for r in ds.records() {
        w.write_record([r.y.to_string(), r.v.to_string(), r.delta.to_string()])
            .map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Usage(format!("cannot write CSV: {e}")))?;
    Ok(())
}

pub fn write_dataset_csv(path: &Path, ds: &CensoredDataset, columns: &Columns) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_dataset(file, ds, columns)
}
