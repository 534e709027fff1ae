//! Tables and their CSV / JSON-lines rendering.

use std::io::Write;

use envcap_core::capacity::NOISE_FLOOR;
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Bool(bool),
    Text(String),
    Json(Value),
}

impl Cell {
    /// Floats in 12 significant digits, with values inside the noise floor written as zero.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Json(v) => v.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(x) => {
                let x = clean(*x);
                serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
            }
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Json(v) => v.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() <= NOISE_FLOOR {
        0.0
    } else {
        x
    }
}

pub fn format_float(x: f64) -> String {
    format!("{:.11e}", clean(x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn write_csv(
    out: &mut impl Write,
    table: &Table,
    cfg: &ExperimentConfig,
    timestamp: Option<&str>,
) -> std::io::Result<()> {
    writeln!(out, "# envcap {}", env!("CARGO_PKG_VERSION"))?;
    let echo = serde_json::to_string(cfg).expect("config serializes");
    writeln!(out, "# config: {echo}")?;
    if let Some(ts) = timestamp {
        writeln!(out, "# timestamp: {ts}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()
}

pub fn write_json(out: &mut impl Write, table: &Table) -> std::io::Result<()> {
    for row in &table.rows {
        let obj: Map<String, Value> = table
            .columns
            .iter()
            .zip(row)
            .map(|(c, v)| ((*c).to_owned(), v.to_json()))
            .collect();
        writeln!(out, "{}", Value::Object(obj))?;
    }
    Ok(())
}
