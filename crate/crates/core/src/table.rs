//! Tabulated results with CSV and JSON serialization.
//!
//! CSV layout: header = axis names, then `value`, then any extra columns.
//! Floats are written with 17 significant digits, so re-reading a table
//! reproduces every number bit for bit.

use crate::error::{FrackError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub coordinates: Vec<f64>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionTable {
    pub axis_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_names: Vec<String>,
    pub rows: Vec<TableRow>,
    pub metadata: BTreeMap<String, String>,
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl SolutionTable {
    pub fn new<S: Into<String>>(axis_names: impl IntoIterator<Item = S>) -> Self {
        SolutionTable {
            axis_names: axis_names.into_iter().map(Into::into).collect(),
            extra_names: Vec::new(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_extras<S: Into<String>>(mut self, extra_names: impl IntoIterator<Item = S>) -> Self {
        self.extra_names = extra_names.into_iter().map(Into::into).collect();
        self
    }

    pub fn push(&mut self, coordinates: Vec<f64>, value: f64) -> Result<()> {
        self.push_with_extras(coordinates, value, Vec::new())
    }

    pub fn push_with_extras(&mut self, coordinates: Vec<f64>, value: f64, extras: Vec<f64>) -> Result<()> {
        if coordinates.len() != self.axis_names.len() {
            return Err(FrackError::invalid(format!(
                "row has {} coordinates, table has {} axes",
                coordinates.len(),
                self.axis_names.len()
            )));
        }
        if extras.len() != self.extra_names.len() {
            return Err(FrackError::invalid(format!(
                "row has {} extra values, table has {} extra columns",
                extras.len(),
                self.extra_names.len()
            )));
        }
        if !value.is_finite() || extras.iter().chain(&coordinates).any(|v| !v.is_finite()) {
            return Err(FrackError::invalid(format!("non-finite entry in row at {coordinates:?}")));
        }
        self.rows.push(TableRow { coordinates, value, extras });
        Ok(())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The `value` column.
    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// One coordinate column.
    pub fn axis(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.coordinates[index]).collect()
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = self.axis_names.clone();
        h.push("value".into());
        h.extend(self.extra_names.iter().cloned());
        h
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| FrackError::Ingestion(format!("CSV write failed: {e}"));
        w.write_record(self.header()).map_err(io)?;
        for r in &self.rows {
            let rec = r
                .coordinates
                .iter()
                .chain(std::iter::once(&r.value))
                .chain(&r.extras)
                .map(|&v| format_float(v));
            w.write_record(rec).map_err(io)?;
        }
        w.flush().map_err(|e| FrackError::Ingestion(format!("CSV write failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// Reads a table written by [`write_csv`](Self::write_csv). The column
    /// named `value` separates axes from extra columns.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r
            .headers()
            .map_err(|e| FrackError::Ingestion(format!("bad CSV header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let pos = header
            .iter()
            .position(|h| h == "value")
            .ok_or_else(|| FrackError::Ingestion("CSV header has no `value` column".into()))?;
        let mut table = SolutionTable::new(header[..pos].to_vec()).with_extras(header[pos + 1..].to_vec());
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| FrackError::Ingestion(format!("CSV record {}: {e}", line + 2)))?;
            let nums: Vec<f64> = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| FrackError::Ingestion(format!("CSV record {}: {e}", line + 2)))?;
            if nums.len() != header.len() {
                return Err(FrackError::Ingestion(format!("CSV record {} has {} fields", line + 2, nums.len())));
            }
            table
                .push_with_extras(nums[..pos].to_vec(), nums[pos], nums[pos + 1..].to_vec())
                .map_err(|e| FrackError::Ingestion(format!("CSV record {}: {e}", line + 2)))?;
        }
        Ok(table)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| FrackError::Ingestion(format!("bad JSON table: {e}")))
    }
}
