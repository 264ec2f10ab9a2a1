//! The structured report every subcommand prints, and its three renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

use wmult_core::rational::{fmt_decimal, fmt_rat};
use wmult_core::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub verdicts: Map<String, Value>,
    pub notes: Vec<String>,
}

pub fn rat_value(x: &Rat) -> Value {
    Value::String(fmt_rat(x))
}

/// A real number as a decimal string together with the digits used.
pub fn real_value(x: &Rat, digits: u32) -> Value {
    serde_json::json!({ "decimal": fmt_decimal(x, digits), "digits": digits })
}

impl Report {
    pub fn new(command: String) -> Self {
        Self {
            command,
            ..Self::default()
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), v.into());
        self
    }

    pub fn verdict(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.verdicts.insert(key.into(), v.into());
        self
    }

    pub fn notes(&mut self, notes: impl IntoIterator<Item = String>) -> &mut Self {
        for n in notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
        self
    }

    fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("results".into(), Value::Object(self.results.clone()));
        m.insert("verdicts".into(), Value::Object(self.verdicts.clone()));
        m.insert(
            "notes".into(),
            Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
        );
        Value::Object(m)
    }

    fn rows(&self) -> Vec<(String, String, String)> {
        let mut rows = vec![("command".into(), String::new(), self.command.clone())];
        for (section, map) in [
            ("inputs", &self.inputs),
            ("results", &self.results),
            ("verdicts", &self.verdicts),
        ] {
            for (k, v) in map {
                flatten(section, k, v, &mut rows);
            }
        }
        for (i, n) in self.notes.iter().enumerate() {
            rows.push(("notes".into(), i.to_string(), n.clone()));
        }
        rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => {
                let rows = self.rows();
                let width = rows
                    .iter()
                    .map(|(s, k, _)| s.len() + k.len() + 1)
                    .max()
                    .unwrap_or(0);
                let mut out = String::new();
                for (s, k, v) in rows {
                    let key = if k.is_empty() { s } else { format!("{s}.{k}") };
                    writeln!(out, "{key:<width$}  {v}").unwrap();
                }
                out
            }
            Format::Csv => {
                let mut out = String::from("section,key,value\n");
                for (s, k, v) in self.rows() {
                    writeln!(out, "{},{},{}", csv_field(&s), csv_field(&k), csv_field(&v)).unwrap();
                }
                out
            }
        }
    }
}

fn flatten(section: &str, key: &str, v: &Value, rows: &mut Vec<(String, String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, inner) in m {
                flatten(section, &format!("{key}.{k}"), inner, rows);
            }
        }
        Value::Array(xs) => {
            for (i, inner) in xs.iter().enumerate() {
                flatten(section, &format!("{key}.{i}"), inner, rows);
            }
        }
        Value::String(s) => rows.push((section.into(), key.into(), s.clone())),
        other => rows.push((section.into(), key.into(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
