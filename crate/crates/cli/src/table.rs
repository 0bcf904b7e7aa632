//! Rows with a fixed header, written as CSV or JSON.

use std::io::Write;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip any f64; adding 0.0 folds -0 into 0
            Cell::Num(x) => format!("{:.16e}", x + 0.0),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}', expected csv or json")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: impl Write) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: impl Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).map_err(CliError::io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(CliError::io)?;
        }
        w.flush().map_err(CliError::io)
    }

    fn write_json(&self, mut out: impl Write) -> Result<(), CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect::<Map<_, _>>()))
            .collect();
        serde_json::to_writer_pretty(&mut out, &rows).map_err(CliError::io)?;
        writeln!(out).map_err(CliError::io)
    }
}
