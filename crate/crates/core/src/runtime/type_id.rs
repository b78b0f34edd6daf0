use std::fmt;
use std::hash::{Hash, Hasher};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Type identity of an error enum: `module::enum` plus its FNV-1a hash.
///
/// The hash is only a fast path; equality always confirms the full names.
#[derive(Debug, Clone)]
pub struct TypeId {
    module: String,
    enum_name: String,
    hash: u64,
}

impl TypeId {
    pub fn new(module: &str, enum_name: &str) -> Self {
        TypeId {
            module: module.to_string(),
            enum_name: enum_name.to_string(),
            hash: fnv1a64(format!("{module}::{enum_name}").as_bytes()),
        }
    }

    /// Builds an identifier with an explicit hash. Used when the hash comes
    /// across the ABI and must not be trusted on its own.
    pub fn with_hash(module: &str, enum_name: &str, hash: u64) -> Self {
        TypeId {
            module: module.to_string(),
            enum_name: enum_name.to_string(),
            hash,
        }
    }

    pub fn module(&self) -> &str {
        &self.module
    }

    pub fn enum_name(&self) -> &str {
        &self.enum_name
    }

    pub fn hash(&self) -> u64 {
        self.hash
    }
}

impl PartialEq for TypeId {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.module == other.module && self.enum_name == other.enum_name
    }
}

impl Eq for TypeId {}

impl Hash for TypeId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}::{}", self.module, self.enum_name)
    }
}
