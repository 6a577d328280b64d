//! Tabular results and their CSV/JSON serialization.
//!
//! Floats are written in the shortest form that round-trips, so identical
//! results give identical bytes. Files are staged under a temporary name in
//! the destination directory and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => float(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Non-finite floats have no JSON form and become `null`.
pub fn float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    /// An array of flat objects, one per row, keys in header order.
    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(self.header.iter().map(|h| h.to_string()).zip(row.iter().map(Cell::json)).collect())
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&rows).expect("serializable");
        out.push(b'\n');
        out
    }

    pub fn encode(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Everything one command produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub table: Table,
    /// Flat summary object written next to the table.
    pub sidecar: Option<Map<String, Value>>,
    /// Diagnostics for the error stream.
    pub warnings: Vec<String>,
}

/// `<out>.meta.json`
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new().prefix(".collapse-spectra-").suffix(".tmp").tempfile_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes the table and, when present, its sidecar. All bytes are encoded
/// before anything touches the disk.
pub fn write_artifacts(artifacts: &Artifacts, out: &Path, format: Format) -> std::io::Result<()> {
    let data = artifacts.table.encode(format);
    let meta = artifacts.sidecar.as_ref().map(|m| {
        let mut v = serde_json::to_vec_pretty(m).expect("serializable");
        v.push(b'\n');
        v
    });
    write_atomic(out, &data)?;
    if let Some(meta) = meta {
        write_atomic(&sidecar_path(out), &meta)?;
    }
    Ok(())
}
