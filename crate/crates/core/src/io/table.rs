//! Result tables and their CSV/JSON encodings.
//!
//! Numbers are first rounded to 12 significant digits (correctly rounded,
//! ties to even) and then printed in the shortest form that round-trips the
//! rounded value, so the CSV and JSON encodings of a table carry identical
//! numbers and repeated runs produce identical bytes.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

/// Significant digits kept in emitted numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Shortest representation of `x` rounded to 12 significant digits.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let y = round_significant(x);
    if y == 0.0 {
        return "0".to_string();
    }
    let a = y.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Command name, tool version and the fully resolved scenario.
    pub meta: Value,
}

impl ResultTable {
    pub fn new(columns: &[&str], meta: Value) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), meta }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; non-numeric cells are skipped.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let Some(j) = self.column(name) else { return Vec::new() };
        self.rows
            .iter()
            .filter_map(|r| match r[j] {
                Cell::Num(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    /// Metadata as `#` comment lines, a header row, then the rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        if let Value::Object(map) = &self.meta {
            for (k, v) in map {
                writeln!(w, "# {k}: {}", compact(v))?;
            }
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(csv_cell))?;
        }
        out.flush()
    }

    /// `{"meta": {..., "columns": [...]}, "rows": [[...], ...]}`
    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut meta = self.meta.clone();
        if let Value::Object(map) = &mut meta {
            map.insert("columns".into(), json!(self.columns));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(json_cell).collect()))
            .collect();
        let doc = json!({ "meta": meta, "rows": rows });
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_number(*v),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Num(v) if v.is_finite() => {
            let y = round_significant(*v);
            json!(if y == 0.0 { 0.0 } else { y })
        }
        Cell::Num(_) | Cell::Empty => Value::Null,
        Cell::Text(s) => json!(s),
        Cell::Bool(b) => json!(b),
    }
}
