//! CSV and JSON writers.
//!
//! Floats are written as `{:.16e}` (17 significant digits, exact round trip);
//! missing values are empty in CSV and `null` in JSON.

use std::io::Write;
use std::path::Path;

use crate::row::{Cell, ResultRow, COLUMNS};
use crate::spec::Format;
use crate::CliError;

fn float_text(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Missing => String::new(),
        Cell::Int(v) => v.to_string(),
        Cell::Float(x) => float_text(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::EmptyRows);
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| CliError::Write(e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for row in rows {
        w.write_record(row.cells().iter().map(cell_text)).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Write(e.to_string()))
}

fn json_value(c: &Cell) -> String {
    match c {
        Cell::Missing => "null".into(),
        Cell::Text(s) => serde_json::to_string(s).expect("strings always serialise"),
        other => cell_text(other),
    }
}

/// An array of flat objects, one per line.
pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::EmptyRows);
    }
    let mut text = String::from("[\n");
    for (i, row) in rows.iter().enumerate() {
        text.push_str("  {");
        for (j, (col, cell)) in COLUMNS.iter().zip(row.cells()).enumerate() {
            if j > 0 {
                text.push_str(", ");
            }
            text.push('"');
            text.push_str(col);
            text.push_str("\": ");
            text.push_str(&json_value(&cell));
        }
        text.push_str(if i + 1 < rows.len() { "},\n" } else { "}\n" });
    }
    text.push_str("]\n");
    out.write_all(text.as_bytes()).map_err(|e| CliError::Write(e.to_string()))?;
    out.flush().map_err(|e| CliError::Write(e.to_string()))
}

pub fn write_rows<W: Write>(rows: &[ResultRow], format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(rows: &[ResultRow], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::EmptyRows);
    }
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?;
            write_rows(rows, format, std::io::BufWriter::new(file))
        }
        None => write_rows(rows, format, std::io::stdout().lock()),
    }
}
