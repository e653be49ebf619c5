//! Canonical JSON: object keys sorted, rationals in lowest terms, two-space
//! indentation and a trailing newline. Equal values give identical bytes.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn to_canonical_value<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    // serde_json's map is a BTreeMap unless `preserve_order` is enabled
    serde_json::to_value(value).map_err(|e| Error::InvalidArgument(format!("serialize: {e}")))
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = to_canonical_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| Error::InvalidArgument(format!("serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed JSON: {e}")))
}
