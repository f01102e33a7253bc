//! Command output: one table plus scalar summary fields, rendered as CSV or
//! as versioned JSON.
//!
//! In CSV the summary fields become trailing columns repeated on every row,
//! so each file is a single rectangular table with a header. Floats use the
//! shortest representation that round-trips; non-finite values are written
//! as `inf`, `-inf` or `NaN` (strings in JSON).

use std::fmt::Write as _;

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Int(i128),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn opt_float(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(i) => match i64::try_from(*i) {
                Ok(v) => Value::from(v),
                Err(_) => Value::String(i.to_string()),
            },
            Cell::Float(x) => {
                serde_json::Number::from_f64(*x).map_or_else(|| Value::String(format_float(*x)), Value::Number)
            }
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
int_cell!(usize, u64, u32, i64);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "true" } else { "false" }.to_owned())
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        serde_json::Number::from_f64(x).expect("finite").to_string()
    }
}

/// How a command finished; decides the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    /// A verification did not hold.
    Fail,
    /// Some rows were rejected as out of domain.
    DomainError,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::DomainError => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::DomainError => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &'static str, config: Value, columns: &[&str]) -> Self {
        Self {
            command,
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            outcome: Outcome::Pass,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.command);
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_owned(), value.into()));
    }

    /// Raises the outcome; a worse outcome is never downgraded.
    pub fn mark(&mut self, outcome: Outcome) {
        self.outcome = self.outcome.max(outcome);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = self.columns.iter().chain(self.summary.iter().map(|(k, _)| k));
        w.write_record(header).expect("in-memory write");
        let tail: Vec<String> = self.summary.iter().map(|(_, v)| v.csv()).collect();
        if self.rows.is_empty() && !self.summary.is_empty() {
            let blanks = vec![String::new(); self.columns.len()];
            w.write_record(blanks.iter().chain(&tail)).expect("in-memory write");
        }
        for row in &self.rows {
            let cells = row.iter().map(Cell::csv).chain(tail.iter().cloned());
            w.write_record(cells).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let mut doc = Map::new();
        doc.insert("schema_version".into(), SCHEMA_VERSION.into());
        doc.insert("command".into(), self.command.into());
        doc.insert("status".into(), self.outcome.label().into());
        doc.insert("config".into(), self.config.clone());
        doc.insert("summary".into(), Value::Object(summary));
        doc.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        let _ = writeln!(out);
        out
    }
}
