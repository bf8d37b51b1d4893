//! Column tables written as CSV or JSON.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    /// CSV text: floats with 17 significant digits, so they parse back exactly.
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, Default)]
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

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Ordered `key, value` pairs describing a run.
pub type Summary = Vec<(&'static str, Cell)>;

fn summary_table(summary: &Summary) -> Table {
    let mut t = Table::new(vec!["key", "value"]);
    for (k, v) in summary {
        t.push(vec![Cell::Text(k.to_string()), v.clone()]);
    }
    t
}

fn summary_json(summary: &Summary) -> Value {
    Value::Object(summary.iter().map(|(k, v)| (k.to_string(), v.json())).collect())
}

/// Writes `rows` in the requested format. CSV puts the summary in a separate
/// `key,value` table on `side`; JSON writes `{"summary": .., "rows": [..]}`.
pub fn emit<W: Write, S: Write>(
    format: Format,
    summary: &Summary,
    rows: &Table,
    main: W,
    side: S,
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            rows.write_csv(main)?;
            summary_table(summary).write_csv(side)?;
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("summary".into(), summary_json(summary));
            obj.insert("rows".into(), rows.json_rows());
            let mut main = main;
            serde_json::to_writer_pretty(&mut main, &Value::Object(obj))?;
            main.write_all(b"\n")?;
        }
    }
    Ok(())
}
