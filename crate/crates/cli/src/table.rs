//! Tab-separated tables: one header row, missing values as empty fields.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, Result};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn clean(field: &str) -> String {
    field.replace(['\t', '\n', '\r'], " ")
}

pub fn write_tsv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let io = |e| CliError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "{}", header.join("\t")).map_err(io)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let fields: Vec<String> = row.iter().map(|f| clean(f)).collect();
        writeln!(w, "{}", fields.join("\t")).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// An in-memory table addressed by column name.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .quoting(false)
            .from_reader(file);
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::schema(path, e))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| CliError::schema(path, e))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    /// Reads several tables and stacks their rows, matching columns by name.
    /// Columns are those of the first table; later tables must contain them.
    pub fn read_many(paths: &[impl AsRef<Path>]) -> Result<Self> {
        let mut out: Option<Table> = None;
        for p in paths {
            let t = Self::read(p.as_ref())?;
            match &mut out {
                None => out = Some(t),
                Some(acc) => {
                    let idx = acc
                        .header
                        .iter()
                        .map(|h| t.column(h).map_err(|e| CliError::schema(p.as_ref(), e)))
                        .collect::<Result<Vec<_>>>()?;
                    acc.rows
                        .extend(t.rows.iter().map(|r| idx.iter().map(|&i| r[i].clone()).collect()));
                }
            }
        }
        out.ok_or_else(|| CliError::Schema("no input tables given".into()))
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Schema(format!("missing column `{name}`")))
    }

    /// Parses cell `(row, col)`; empty cells are missing.
    pub fn number(&self, row: usize, col: usize) -> Result<Option<f64>> {
        let cell = self.rows[row][col].trim();
        if cell.is_empty() {
            return Ok(None);
        }
        cell.parse()
            .map(Some)
            .map_err(|_| CliError::Schema(format!("row {}: `{cell}` is not a number", row + 2)))
    }

    pub fn numbers(&self, col: usize) -> Result<Vec<Option<f64>>> {
        (0..self.rows.len()).map(|r| self.number(r, col)).collect()
    }
}
