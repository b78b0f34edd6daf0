use std::fmt;

use crate::idl::ScalarType;

/// An argument or return cell.
#[derive(Debug, Clone, Copy)]
pub enum Value {
    Unit,
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl Value {
    pub fn ty(&self) -> ScalarType {
        match self {
            Value::Unit => ScalarType::Unit,
            Value::Int(_) => ScalarType::Int,
            Value::Float(_) => ScalarType::Float,
            Value::Bool(_) => ScalarType::Bool,
        }
    }

    /// Parses a command-line style literal as a value of type `ty`.
    pub fn parse_as(text: &str, ty: ScalarType) -> Option<Value> {
        match ty {
            ScalarType::Int => text.parse().ok().map(Value::Int),
            ScalarType::Float => text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Value::Float),
            ScalarType::Bool => text.parse().ok().map(Value::Bool),
            ScalarType::Unit => (text == "()").then_some(Value::Unit),
        }
    }
}

// Floats compare by bit pattern so that NaN results from identical
// computations are equal.
impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Unit, Value::Unit) => true,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Float(a), Value::Float(b)) => a.to_bits() == b.to_bits(),
            (Value::Bool(a), Value::Bool(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
        }
    }
}

pub const TAG_UNIT: u8 = 0;
pub const TAG_INT: u8 = 1;
pub const TAG_FLOAT: u8 = 2;
pub const TAG_BOOL: u8 = 3;

/// ABI value cell: one tag byte followed by an 8-byte little-endian payload.
/// Nine bytes, byte-aligned.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EbValue {
    pub tag: u8,
    pub payload: [u8; 8],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CellError {
    #[error("unknown value tag {0}")]
    UnknownTag(u8),
    #[error("bool payload must be 0 or 1")]
    BadBool,
}

impl From<Value> for EbValue {
    fn from(v: Value) -> Self {
        let (tag, bits) = match v {
            Value::Unit => (TAG_UNIT, 0u64),
            Value::Int(i) => (TAG_INT, i as u64),
            Value::Float(f) => (TAG_FLOAT, f.to_bits()),
            Value::Bool(b) => (TAG_BOOL, b as u64),
        };
        EbValue {
            tag,
            payload: bits.to_le_bytes(),
        }
    }
}

impl TryFrom<EbValue> for Value {
    type Error = CellError;

    fn try_from(cell: EbValue) -> Result<Self, CellError> {
        let bits = u64::from_le_bytes(cell.payload);
        Ok(match cell.tag {
            TAG_UNIT => Value::Unit,
            TAG_INT => Value::Int(bits as i64),
            TAG_FLOAT => Value::Float(f64::from_bits(bits)),
            TAG_BOOL => match bits {
                0 => Value::Bool(false),
                1 => Value::Bool(true),
                _ => return Err(CellError::BadBool),
            },
            other => return Err(CellError::UnknownTag(other)),
        })
    }
}
