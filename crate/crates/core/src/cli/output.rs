//! Report structure and its JSON / CSV encodings.
//!
//! Both encodings print every float as `{:.16e}` (17 significant digits), so
//! a value reads back bit-for-bit and the two formats carry identical text.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1.0";
pub const UNIT_SYSTEM: &str = "atomic";

#[derive(Debug, Clone, PartialEq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped(&'static str),
}

impl Serialize for CheckStatus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CheckStatus::Pass => s.serialize_str("pass"),
            CheckStatus::Fail => s.serialize_str("fail"),
            CheckStatus::Skipped(why) => s.serialize_str(&format!("skipped: {why}")),
        }
    }
}

/// How `measured` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub measured: Option<f64>,
    pub relation: Relation,
    pub threshold: f64,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, threshold: f64) -> Self {
        Self::evaluate(name, measured, Relation::AtMost, threshold)
    }

    pub fn above(name: &str, measured: f64, threshold: f64) -> Self {
        Self::evaluate(name, measured, Relation::Above, threshold)
    }

    fn evaluate(name: &str, measured: f64, relation: Relation, threshold: f64) -> Self {
        let ok = match relation {
            Relation::AtMost => measured <= threshold,
            Relation::Above => measured > threshold,
        };
        Self {
            name: name.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            measured: Some(measured),
            relation,
            threshold,
        }
    }

    pub fn skipped(name: &str, relation: Relation, threshold: f64, why: &'static str) -> Self {
        Self {
            name: name.to_string(),
            status: CheckStatus::Skipped(why),
            measured: None,
            relation,
            threshold,
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub units: &'static str,
    pub command: &'static str,
    pub config_echo: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl RunReport {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(Check::failed)
    }
}

pub fn format_float(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => number_text(n),
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => unreachable!("not a scalar"),
    }
}

fn number_text(n: &serde_json::Number) -> String {
    if let Some(u) = n.as_u64() {
        u.to_string()
    } else if let Some(i) = n.as_i64() {
        i.to_string()
    } else {
        // serde_json never stores non-finite floats
        format_float(n.as_f64().unwrap_or(f64::NAN)).unwrap_or_else(|| "null".into())
    }
}

fn sorted(map: &Map<String, Value>) -> Vec<(&String, &Value)> {
    let mut entries: Vec<_> = map.iter().collect();
    entries.sort_by(|a, b| a.0.cmp(b.0));
    entries
}

fn write_json_value<W: Write + ?Sized>(w: &mut W, v: &Value, indent: usize) -> io::Result<()> {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => write!(w, "null"),
        Value::Bool(b) => write!(w, "{b}"),
        Value::Number(n) => write!(w, "{}", number_text(n)),
        Value::String(s) => write!(w, "{}", Value::String(s.clone())),
        Value::Array(items) => {
            if items.is_empty() {
                return write!(w, "[]");
            }
            writeln!(w, "[")?;
            for (i, item) in items.iter().enumerate() {
                write!(w, "{}", pad(indent + 1))?;
                write_json_value(w, item, indent + 1)?;
                writeln!(w, "{}", if i + 1 < items.len() { "," } else { "" })?;
            }
            write!(w, "{}]", pad(indent))
        }
        Value::Object(map) => {
            if map.is_empty() {
                return write!(w, "{{}}");
            }
            writeln!(w, "{{")?;
            let entries = sorted(map);
            for (i, (k, item)) in entries.iter().enumerate() {
                write!(w, "{}{}: ", pad(indent + 1), Value::String((*k).clone()))?;
                write_json_value(w, item, indent + 1)?;
                writeln!(w, "{}", if i + 1 < entries.len() { "," } else { "" })?;
            }
            write!(w, "{}}}", pad(indent))
        }
    }
}

/// Key-sorted, indented JSON.
pub fn write_json<W: Write + ?Sized>(w: &mut W, v: &Value) -> io::Result<()> {
    write_json_value(w, v, 0)?;
    writeln!(w)
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), item, rows);
            }
        }
        Value::Object(map) => {
            for (k, item) in sorted(map) {
                flatten(&join(k), item, rows);
            }
        }
        _ => rows.push((prefix.to_string(), scalar_text(v))),
    }
}

/// One `key,value` row per scalar, keyed by its dotted path in the JSON form.
pub fn write_csv<W: Write>(w: W, v: &Value) -> io::Result<()> {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["key", "value"])?;
    for (k, v) in rows {
        out.write_record([k, v])?;
    }
    out.flush()
}
