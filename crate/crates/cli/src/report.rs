//! Tabular reports rendered as CSV or JSON lines.

use std::io::Write;

use freeprob::Rational;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(usize),
    Rat(Rational),
    /// Floating-point column; the column name carries the `_f64` suffix.
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Rat(q) => q.to_string(),
            Cell::Float(x) => x.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => Value::from(*n),
            Cell::Rat(q) => Value::from(q.to_string()),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<Rational> for Cell {
    fn from(q: Rational) -> Self {
        Cell::Rat(q)
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

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// One table, trailing JSON lines, and the identity checks that failed.
#[derive(Debug, Default)]
pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    trailer: Vec<Value>,
    failures: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            ..Report::default()
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// A JSON line printed after the table in either format.
    pub fn trailer(&mut self, value: Value) {
        self.trailer.push(value);
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                for row in &self.rows {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    writeln!(out, "{}", Value::Object(obj))?;
                }
            }
        }
        for line in &self.trailer {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use freeprob::scalar::rat;

    fn sample() -> Report {
        let mut r = Report::new(&["n", "value", "value_f64", "ok"]);
        r.row(vec![1.into(), rat(3, 4).into(), 0.75.into(), true.into()]);
        r.trailer(serde_json::json!({"mass": "3/4"}));
        r
    }

    #[test]
    fn csv_rendering() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,value,value_f64,ok\n1,3/4,0.75,true\n{\"mass\":\"3/4\"}\n");
    }

    #[test]
    fn json_rendering_keeps_column_order() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"n\":1,\"value\":\"3/4\",\"value_f64\":0.75,\"ok\":true}\n{\"mass\":\"3/4\"}\n"
        );
    }
}
