use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

/// One command invocation and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub result: Value,
    pub timing_ms: u64,
    pub assumptions: Vec<String>,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        RunRecord {
            command: command.to_string(),
            params: BTreeMap::new(),
            result: Value::Null,
            timing_ms: 0,
            assumptions: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        if !v.is_null() {
            self.params.insert(key.to_string(), v);
        }
    }

    pub fn assume(&mut self, text: impl Into<String>) {
        self.assumptions.push(text.into());
    }

    /// The record with timing zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        RunRecord {
            timing_ms: 0,
            ..self.clone()
        }
    }
}

/// Serializes as a JSON number when it fits in `u64`, otherwise as a string.
pub(crate) fn big<S: Serializer>(x: &u128, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(*x) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}
