//! Canonical JSON fixture format for [`RawDocument`].
//!
//! Keys are sorted and every float is rounded to three decimals, so dumping
//! the same document twice produces byte-identical files.

use std::fs;
use std::path::Path;

use serde_json::Value;

use super::RawDocument;
use crate::error::{Error, Result};

const DECIMALS: f64 = 1000.0;

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            let mut r = (x * DECIMALS).round() / DECIMALS;
            if r == 0.0 {
                r = 0.0; // folds -0.0
            }
            if let Some(num) = serde_json::Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Serializes to the canonical fixture text.
pub fn fixture_to_string(doc: &RawDocument) -> Result<String> {
    // serde_json's default map is ordered by key.
    let mut value = serde_json::to_value(doc)?;
    round_floats(&mut value);
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

pub fn dump_fixture(doc: &RawDocument, json_path: impl AsRef<Path>) -> Result<()> {
    fs::write(json_path, fixture_to_string(doc)?)?;
    Ok(())
}

/// Parses fixture text and validates document invariants.
pub fn parse_fixture(text: &str) -> Result<RawDocument> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: RawDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        Error::SchemaViolation {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        }
    })?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_fixture(json_path: impl AsRef<Path>) -> Result<RawDocument> {
    let path = json_path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    parse_fixture(&text)
}
