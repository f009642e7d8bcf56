use std::io::Write;

use psimt::ComplexQuaternion;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub const SCHEMA: &str = "psimt-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Per-point table; cells are numbers, strings or empty.
#[derive(Debug, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub passed: bool,
    pub failures: Vec<String>,
    pub summary: Value,
    pub table: Table,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Self {
            schema: SCHEMA,
            command,
            config,
            passed: true,
            failures: Vec::new(),
            summary: Value::Null,
            table: Table::default(),
        }
    }

    /// Record an assertion; a false `ok` marks the run as failed.
    pub fn check(&mut self, ok: bool, message: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.failures.push(message.into());
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "# schema={} command={} passed={}", self.schema, self.command, self.passed)?;
                writeln!(out, "# config={}", serde_json::to_string(&self.config)?)?;
                for f in &self.failures {
                    writeln!(out, "# failure: {f}")?;
                }
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.table.columns)?;
                for row in &self.table.rows {
                    w.write_record(row.iter().map(cell))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Column names for the eight real components of a quaternion.
pub fn quaternion_columns(prefix: &str) -> Vec<String> {
    ["0", "1", "2", "3"]
        .iter()
        .flat_map(|k| [format!("{prefix}{k}_re"), format!("{prefix}{k}_im")])
        .collect()
}

pub fn quaternion_cells(q: ComplexQuaternion) -> Vec<Value> {
    q.0.iter().flat_map(|c| [Value::from(c.re), Value::from(c.im)]).collect()
}

pub fn point_cells(x: [f64; 3]) -> Vec<Value> {
    x.iter().map(|&v| Value::from(v)).collect()
}

pub fn optional(v: Option<f64>) -> Value {
    v.map(Value::from).unwrap_or(Value::Null)
}
