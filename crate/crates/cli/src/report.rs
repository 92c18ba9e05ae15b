//! Deterministic experiment reports: metadata, named tables and
//! pass/fail checks, emitted as CSV (9 significant digits, LF endings)
//! or JSON (stable key order). Reruns with the same configuration
//! produce byte-identical output.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Value {
    UInt(u64),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::UInt(x as u64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::UInt(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Relation the measurement must satisfy against the threshold.
    pub relation: String,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn leq(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            relation: "<=".into(),
            threshold,
            passed: measured <= threshold,
        }
    }

    pub fn less(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            relation: "<".into(),
            threshold,
            passed: measured < threshold,
        }
    }

    pub fn geq(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            relation: ">=".into(),
            threshold,
            passed: measured >= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub metadata: BTreeMap<String, String>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("command".into(), command.to_string());
        metadata.insert("seed".into(), seed.to_string());
        metadata.insert("version".into(), env!("CARGO_PKG_VERSION").to_string());
        Self { metadata, tables: Vec::new(), checks: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(format!("param.{key}"), value.to_string());
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(format!("note.{key}"), value.to_string());
    }

    pub fn table(
        &mut self,
        name: &str,
        columns: &[&str],
        rows: Vec<Vec<Value>>,
    ) {
        self.tables.push(Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for table in &self.tables {
            out.push('\n');
            out.push_str(&format!("# table {}\n", table.name));
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(format_value).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
            out.push_str("# table checks\n");
            out.push_str("name,measured,relation,threshold,passed\n");
            for c in &self.checks {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.name,
                    format_float(c.measured),
                    c.relation,
                    format_float(c.threshold),
                    c.passed
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Nine significant digits, scientific notation, locale-free.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.8e}")
}

fn format_value(v: &Value) -> String {
    match v {
        Value::UInt(u) => u.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Float(x) => format_float(*x),
        Value::Text(s) => s.clone(),
    }
}
