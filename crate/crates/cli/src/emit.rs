//! CSV and JSON writers for result tables.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::{invalid, CliError};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// 17 significant digits round-trip every `f64`.
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => Value::String(format_float(*x)),
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Result<Self, CliError> {
        if let Some(bad) = rows.iter().position(|r| r.len() != columns.len()) {
            return Err(invalid(format!(
                "row {bad} has {} cells for {} columns",
                rows[bad].len(),
                columns.len()
            )));
        }
        Ok(Self { columns, rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_csv(table: &Table, out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv_text)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(table: &Table, meta: Map<String, Value>, out: &mut dyn Write) -> Result<(), CliError> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
        .collect();
    let doc = json!({ "meta": meta, "columns": table.columns, "rows": rows });
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| CliError::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Io(io),
        other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}
