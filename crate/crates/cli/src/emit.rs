//! Deterministic JSON and CSV documents. Floats are printed in scientific
//! notation with a fixed number of significant digits, and JSON numbers keep
//! exactly that text.

use std::io::Write;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Number, Value};

use crate::args::Format;

/// One scalar in a record or table row.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Float(x)
    }
}

impl From<Option<f64>> for Field {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Field::Null, Field::Float)
    }
}

impl From<u32> for Field {
    fn from(x: u32) -> Self {
        Field::Int(x as i64)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x as i64)
    }
}

impl From<bool> for Field {
    fn from(x: bool) -> Self {
        Field::Bool(x)
    }
}

impl From<&str> for Field {
    fn from(x: &str) -> Self {
        Field::Text(x.to_owned())
    }
}

/// Ordered `(name, value)` pairs.
pub type Record = Vec<(String, Field)>;

pub fn record<const K: usize>(fields: [(&str, Field); K]) -> Record {
    fields.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub precision: u8,
}

impl Style {
    pub fn float_text(&self, x: f64) -> Result<String> {
        if !x.is_finite() {
            bail!(NonFinite);
        }
        let text = format!("{:.*e}", self.precision as usize - 1, x);
        // explicit exponent sign, the form JSON number serialization settles on
        Ok(match text.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => text,
        })
    }

    pub fn float(&self, x: f64) -> Result<Value> {
        let text = self.float_text(x)?;
        let n: Number = text.parse().with_context(|| format!("formatted float `{text}` is not a JSON number"))?;
        Ok(Value::Number(n))
    }

    pub fn field(&self, f: &Field) -> Result<Value> {
        Ok(match f {
            Field::Float(x) => self.float(*x)?,
            Field::Int(i) => Value::Number((*i).into()),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
        })
    }

    pub fn object(&self, rec: &Record) -> Result<Value> {
        let mut m = Map::new();
        for (k, v) in rec {
            m.insert(k.clone(), self.field(v)?);
        }
        Ok(Value::Object(m))
    }

    pub fn cell(&self, f: &Field) -> Result<String> {
        Ok(match f {
            Field::Float(x) => self.float_text(*x)?,
            Field::Int(i) => i.to_string(),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        })
    }
}

/// A value that cannot be written to JSON or CSV.
#[derive(Debug, Clone, Copy)]
pub struct NonFinite;

impl std::fmt::Display for NonFinite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("computation produced a non-finite value")
    }
}

impl std::error::Error for NonFinite {}

/// Everything a command emits: a JSON document and an equivalent flat table.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Output {
    /// A one-row table whose JSON form nests `inputs` and `results`.
    pub fn single(style: Style, command: &str, units: &str, inputs: Record, results: Record) -> Result<Self> {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(command.into()));
        doc.insert("units".into(), Value::String(units.into()));
        doc.insert("inputs".into(), style.object(&inputs)?);
        doc.insert("results".into(), style.object(&results)?);
        let (header, row): (Vec<String>, Vec<Field>) = inputs.into_iter().chain(results).unzip();
        Ok(Output { json: Value::Object(doc), header, rows: vec![row] })
    }

    pub fn render(&self, style: Style, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(&self.json)?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .delimiter(b',')
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                w.write_record(&self.header)?;
                for row in &self.rows {
                    let cells = row.iter().map(|f| style.cell(f)).collect::<Result<Vec<_>>>()?;
                    w.write_record(&cells)?;
                }
                w.into_inner().context("flushing CSV buffer")
            }
            Format::Table => {
                let cells = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|f| style.cell(f)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for row in &cells {
                    for (w, c) in widths.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let mut text = String::new();
                for row in std::iter::once(&self.header).chain(&cells) {
                    let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    text.push_str(line.join("  ").trim_end());
                    text.push('\n');
                }
                Ok(text.into_bytes())
            }
        }
    }
}

pub fn write_to(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).context("writing to stdout")?;
            out.flush().context("flushing stdout")
        }
    }
}
