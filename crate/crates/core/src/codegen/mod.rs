//! C++ bridging artifacts for a validated module: a support header, a
//! module header and the registry file the generated code loads at run time.

mod module_header;
mod names;
mod options;
mod support;

use sha2::{Digest, Sha256};

use crate::idl::{serialize_module, ValidatedModule};

pub use module_header::emit_module_header;
pub use options::GenOptions;
pub use support::emit_support_header;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("invalid {option} `{value}`: {reason}")]
    InvalidOption {
        option: &'static str,
        value: String,
        reason: String,
    },
    #[error("{kind} `{name}` cannot be emitted: {reason}")]
    ReservedName {
        kind: &'static str,
        name: String,
        reason: String,
    },
    #[error("function `{function}` has an unsupported signature: {detail}")]
    UnsupportedType { function: String, detail: String },
}

/// Everything `generate` produces, plus a manifest of file names and
/// SHA-256 digests in the order the files are listed by [`GenArtifacts::files`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenArtifacts {
    pub support_header_name: String,
    pub support_header: String,
    pub module_header_name: String,
    pub module_header: String,
    pub registry_name: String,
    pub registry_bytes: Vec<u8>,
    pub manifest: Vec<(String, String)>,
}

impl GenArtifacts {
    pub fn files(&self) -> [(&str, &[u8]); 3] {
        [
            (&self.support_header_name, self.support_header.as_bytes()),
            (&self.module_header_name, self.module_header.as_bytes()),
            (&self.registry_name, &self.registry_bytes),
        ]
    }
}

pub fn emit_registry(module: &ValidatedModule) -> Vec<u8> {
    serialize_module(module)
}

pub fn registry_file_name(module: &ValidatedModule) -> String {
    format!("{}.ebm", module.name.as_str())
}

pub fn module_header_file_name(module: &ValidatedModule) -> String {
    format!("{}.h", module.name.as_str())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn generate(
    module: &ValidatedModule,
    options: &GenOptions,
) -> Result<GenArtifacts, CodegenError> {
    options.validate()?;
    let module_header_name = module_header_file_name(module);
    let registry_name = registry_file_name(module);
    if options.support_header_name == module_header_name
        || options.support_header_name == registry_name
    {
        return Err(CodegenError::InvalidOption {
            option: "support_header_name",
            value: options.support_header_name.clone(),
            reason: "collides with a generated module file".to_string(),
        });
    }
    let module_header = emit_module_header(module, options)?;
    let mut artifacts = GenArtifacts {
        support_header_name: options.support_header_name.clone(),
        support_header: emit_support_header(options),
        module_header_name,
        module_header,
        registry_name,
        registry_bytes: emit_registry(module),
        manifest: Vec::new(),
    };
    artifacts.manifest = artifacts
        .files()
        .iter()
        .map(|(name, bytes)| (name.to_string(), sha256_hex(bytes)))
        .collect();
    Ok(artifacts)
}
