//! Report model shared by every command, with canonical JSON and CSV output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rng::GENERATOR;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Input(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// sha256 of the canonical JSON of the inputs
    pub inputs_digest: String,
    pub seed: u64,
    pub generator: String,
    pub certificates: Value,
    pub dims: Value,
    pub verdicts: Value,
    /// tabular payload (census, good degrees); emitted row by row as CSV
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Value>>,
    /// command-specific payload such as a serialized form
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

fn empty() -> Value {
    Value::Object(Default::default())
}

/// Canonical JSON text: object keys sorted, no whitespace.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    serde_json::to_string(v).expect("values always serialize")
}

pub fn digest(inputs: &Value) -> String {
    hex::encode(Sha256::digest(canonical_json(inputs).as_bytes()))
}

impl Report {
    pub fn new(command: &str, inputs: &Value, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs_digest: digest(inputs),
            seed,
            generator: GENERATOR.to_string(),
            certificates: empty(),
            dims: empty(),
            verdicts: empty(),
            table: None,
            output: None,
            timings_ms: None,
        }
    }

    pub fn parse_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Input(format!("bad report: {e}")))
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Array(items) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Serializes a report. JSON is pretty-printed with sorted keys and a final
/// newline. CSV is the table when there is one, otherwise `key,value` rows
/// over the flattened report.
pub fn emit(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let v = serde_json::to_value(report).expect("report serializes");
            let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match &report.table {
                Some(rows) => {
                    let columns: Vec<String> = rows
                        .first()
                        .and_then(|r| r.as_object())
                        .map(|o| o.keys().cloned().collect())
                        .unwrap_or_default();
                    w.write_record(&columns).expect("in-memory write");
                    for row in rows {
                        let rec: Vec<String> = columns.iter().map(|c| row.get(c).map(scalar).unwrap_or_default()).collect();
                        w.write_record(&rec).expect("in-memory write");
                    }
                }
                None => {
                    let v = serde_json::to_value(report).expect("report serializes");
                    let mut rows = Vec::new();
                    flatten("", &v, &mut rows);
                    w.write_record(["key", "value"]).expect("in-memory write");
                    for (k, x) in rows {
                        w.write_record([k, x]).expect("in-memory write");
                    }
                }
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"b":1,"a":{"y":2,"x":[1,2]}}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"a":{"x":[1,2],"y":2},"b":1}"#).unwrap();
        assert_eq!(digest(&a), digest(&b));
        assert_ne!(digest(&a), digest(&json!({"b": 2})));
    }

    #[test]
    fn emit_round_trip_and_csv_rows() {
        let mut r = Report::new("census", &json!({"n": 5}), 3);
        r.verdicts = json!({"ok": true});
        r.table = Some(vec![json!({"degree": 4, "family": "E"}), json!({"degree": 8, "family": "E"})]);
        let bytes = emit(&r, Format::Json);
        assert_eq!(bytes, emit(&r, Format::Json));
        assert_eq!(Report::parse_json(&bytes).unwrap(), r);
        let csv = String::from_utf8(emit(&r, Format::Csv)).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().next(), Some("degree,family"));
    }

    #[test]
    fn csv_flattens_without_table() {
        let mut r = Report::new("kupka", &json!({}), 0);
        r.dims = json!({"codim": {"sing": 2}});
        let csv = String::from_utf8(emit(&r, Format::Csv)).unwrap();
        assert!(csv.contains("dims.codim.sing,2"));
    }
}
