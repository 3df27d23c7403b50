//! Run configuration, content hashing and CSV/JSON emission.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Fully resolved configuration of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(subcommand: impl Into<String>, format: Format) -> Self {
        Self { subcommand: subcommand.into(), parameters: BTreeMap::new(), format }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("parameters serialize");
        self.parameters.insert(key.to_string(), v);
        self
    }

    pub fn seed(&self) -> Option<u64> {
        self.parameters.get("seed").and_then(Value::as_u64)
    }

    /// Canonical JSON: keys are sorted because parameters is a BTreeMap.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            // 17 significant digits round-trip every f64.
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) if x.is_finite() => Value::from(*x),
            Cell::Float(x) => Value::from(x.to_string()),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Column-oriented result table.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Renders with the provenance columns (version, config hash, seed)
    /// prepended and the resolved config appended to every row.
    pub fn render(&self, config: &RunConfig) -> String {
        let hash = config.content_hash();
        let seed = config.seed().map(|s| Cell::Int(s as i64)).unwrap_or(Cell::Text(String::new()));
        let cfg = config.canonical_json();
        let mut header: Vec<String> = vec!["version".into(), "config_hash".into(), "seed".into()];
        header.extend(self.columns.iter().cloned());
        header.push("config".into());
        let rows = self.rows.iter().map(|r| {
            let mut full = vec![Cell::from(crate::VERSION), Cell::from(hash.clone()), seed.clone()];
            full.extend(r.iter().cloned());
            full.push(Cell::from(cfg.clone()));
            full
        });
        match config.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&header).expect("in-memory write");
                for r in rows {
                    w.write_record(r.iter().map(Cell::csv)).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
            }
            Format::Json => {
                let array: Vec<Value> = rows
                    .map(|r| {
                        let mut obj = Map::new();
                        for (k, c) in header.iter().zip(&r) {
                            obj.insert(k.clone(), c.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(array)).expect("serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Writes to the file if given, otherwise to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// A run finished but a checked quantity missed its tolerance.
#[derive(Debug)]
pub struct AccuracyFailure(pub String);

impl fmt::Display for AccuracyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "accuracy failure: {}", self.0)
    }
}

impl std::error::Error for AccuracyFailure {}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(format: Format) -> RunConfig {
        let mut c = RunConfig::new("rmt", format);
        c.set("seed", 7u64).set("n", vec![25, 50]);
        c
    }

    #[test]
    fn hash_ignores_insertion_order() {
        let mut a = RunConfig::new("x", Format::Csv);
        a.set("b", 1).set("a", 2);
        let mut b = RunConfig::new("x", Format::Csv);
        b.set("a", 2).set("b", 1);
        assert_eq!(a.content_hash(), b.content_hash());
        b.set("a", 3);
        assert_ne!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn csv_floats_round_trip() {
        let mut t = Table::new(&["x"]);
        let x = 0.1 + 0.2;
        t.push(vec![x.into()]);
        let text = t.render(&config(Format::Csv));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let rec = r.records().next().unwrap().unwrap();
        assert_eq!(&rec[1].len(), &64);
        assert_eq!(&rec[2], "7");
        assert_eq!(rec[3].parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn json_mirrors_csv_columns() {
        let mut t = Table::new(&["n", "ratio"]);
        t.push(vec![25usize.into(), 1.25.into()]);
        let v: Value = serde_json::from_str(&t.render(&config(Format::Json))).unwrap();
        let row = v[0].as_object().unwrap();
        let keys: Vec<&str> = row.keys().map(String::as_str).collect();
        for k in ["version", "config_hash", "seed", "n", "ratio", "config"] {
            assert!(keys.contains(&k));
        }
        assert_eq!(row["ratio"].as_f64(), Some(1.25));
    }
}
