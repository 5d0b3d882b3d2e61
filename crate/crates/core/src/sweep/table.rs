use std::io::Write;

use serde_json::{Map, Number, Value};

use super::config::OutputFormat;
use crate::error::{Result, ZenoError};

/// One table cell. Reals print with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// A rectangular result table with named columns. `failures` counts rows
/// whose check did not pass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub failures: usize,
}

impl SweepResult {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            failures: 0,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let index = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[index]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| ZenoError::Config {
            field: "output".into(),
            reason: e.to_string(),
        };
        writer.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        let bytes = writer.into_inner().map_err(|e| ZenoError::Config {
            field: "output".into(),
            reason: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is valid UTF-8"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), cell.json()))
                    .collect();
                Value::Object(object)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => Ok(self.to_json()),
        }
    }

    pub fn write_to(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        out.write_all(self.render(format)?.as_bytes())
            .map_err(|e| ZenoError::Config {
                field: "out".into(),
                reason: e.to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepResult {
        let mut t = SweepResult::new(vec!["n", "value", "status"]);
        t.push(vec![Cell::Int(1), Cell::Real(0.1), Cell::text("ok")]);
        t.push(vec![Cell::Int(2), Cell::Real(f64::NAN), Cell::Empty]);
        t
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(csv, "n,value,status\n1,1.0000000000000001e-1,ok\n2,NaN,\n");
    }

    #[test]
    fn json_mirrors_columns_in_order() {
        let json = sample().to_json();
        let parsed: Value = serde_json::from_str(&json).unwrap();
        let first = parsed[0].as_object().unwrap();
        assert_eq!(first.keys().cloned().collect::<Vec<_>>(), vec!["n", "value", "status"]);
        assert_eq!(parsed[1]["value"], Value::Null);
    }

    #[test]
    fn column_lookup() {
        assert_eq!(sample().column("n").unwrap(), vec![&Cell::Int(1), &Cell::Int(2)]);
        assert!(sample().column("missing").is_none());
    }
}
