//! Tabular output shared by every subcommand. TSV and JSON carry the same
//! values; JSON wraps the rows in an object that may also hold a `result`.

use std::fmt::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
    summary: Option<(String, Value)>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Report {
        Report { columns: columns.to_vec(), rows: Vec::new(), summary: None }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        assert_eq!(values.len(), self.columns.len(), "row width");
        self.rows.push(values);
    }

    /// A closing line for TSV and a `result` object for JSON.
    pub fn summary(&mut self, text: String, value: Value) {
        self.summary = Some((text, value));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = self.columns.join("\t");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(tsv_cell).collect();
                    writeln!(out, "{}", cells.join("\t")).unwrap();
                }
                if let Some((text, _)) = &self.summary {
                    writeln!(out, "{text}").unwrap();
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let object: Map<String, Value> =
                            self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
                        Value::Object(object)
                    })
                    .collect();
                let mut top = Map::new();
                top.insert("rows".into(), Value::Array(rows));
                if let Some((_, value)) = &self.summary {
                    top.insert("result".into(), value.clone());
                }
                let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
                out.push('\n');
                out
            }
        }
    }
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Number(x) if x.is_f64() => format!("{}", x.as_f64().expect("f64")),
        other => other.to_string(),
    }
}
