use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of named columns, written as CSV or as JSON objects.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn object(&self, row: &[Value]) -> Value {
        let mut m = Map::new();
        for (h, v) in self.headers.iter().zip(row) {
            m.insert(h.clone(), v.clone());
        }
        Value::Object(m)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.rows.iter().map(|r| self.object(r)).collect())
    }

    /// The single row as an object; for one-record reports.
    pub fn to_json_record(&self) -> Value {
        self.rows.first().map(|r| self.object(r)).unwrap_or(Value::Null)
    }

    pub fn write<W: Write>(&self, out: W, format: Format, record: bool) -> Result<()> {
        match format {
            Format::Json => {
                let v = if record { self.to_json_record() } else { self.to_json() };
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, &v)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
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
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
