//! Canonical module serialization: pretty-printed JSON with sorted keys and
//! a trailing newline.

use super::ast::{InterfaceModule, ValidatedModule};
use super::diag::Diagnostics;
use super::validate::validate;

#[derive(Debug, thiserror::Error)]
pub enum DeserializeError {
    #[error("malformed module bytes at offset {offset}: {message}")]
    Malformed { offset: usize, message: String },
    #[error("module failed validation: {0}")]
    Invalid(Diagnostics),
}

pub fn serialize_module(module: &ValidatedModule) -> Vec<u8> {
    // Going through `Value` sorts object keys (serde_json's map is ordered
    // by key unless `preserve_order` is on).
    let value = serde_json::to_value(module.module()).expect("module is always representable");
    let mut out = serde_json::to_vec_pretty(&value).expect("in-memory write");
    out.push(b'\n');
    out
}

pub fn deserialize_module(bytes: &[u8]) -> Result<ValidatedModule, DeserializeError> {
    let module: InterfaceModule =
        serde_json::from_slice(bytes).map_err(|e| DeserializeError::Malformed {
            offset: byte_offset(bytes, e.line(), e.column()),
            message: e.to_string(),
        })?;
    validate(module).map_err(DeserializeError::Invalid)
}

/// Converts serde_json's 1-based line / column into a byte offset.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let mut line_start = 0;
    let mut current = 1;
    for (i, &b) in bytes.iter().enumerate() {
        if current >= line {
            break;
        }
        if b == b'\n' {
            current += 1;
            line_start = i + 1;
        }
    }
    (line_start + column.saturating_sub(1)).min(bytes.len())
}
