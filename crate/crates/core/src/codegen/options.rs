use crate::idl::ValidatedModule;

use super::names::check_cxx_name;
use super::CodegenError;

/// Presentation knobs for header generation. None of them affect the
/// registry file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    /// C++ namespace for module declarations. `None` means the module name.
    pub namespace: Option<String>,
    pub support_header_name: String,
    pub macro_prefix: String,
    /// Precede each emitted declaration with a `// line N` comment pointing
    /// at its `.eb` source.
    pub emit_line_comments: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            namespace: None,
            support_header_name: "errbridge_support.h".to_string(),
            macro_prefix: "EB".to_string(),
            emit_line_comments: false,
        }
    }
}

impl GenOptions {
    pub fn namespace_for<'a>(&'a self, module: &'a ValidatedModule) -> &'a str {
        self.namespace.as_deref().unwrap_or(module.name.as_str())
    }

    pub fn validate(&self) -> Result<(), CodegenError> {
        if let Some(ns) = &self.namespace {
            check_cxx_name(ns).map_err(|reason| CodegenError::InvalidOption {
                option: "namespace",
                value: ns.clone(),
                reason,
            })?;
        }
        check_cxx_name(&self.macro_prefix).map_err(|reason| CodegenError::InvalidOption {
            option: "macro_prefix",
            value: self.macro_prefix.clone(),
            reason,
        })?;
        let name = &self.support_header_name;
        let ok = !name.is_empty()
            && !name.contains(['/', '\\', '"', '\n', '<', '>'])
            && name != "."
            && name != "..";
        if !ok {
            return Err(CodegenError::InvalidOption {
                option: "support_header_name",
                value: name.clone(),
                reason: "must be a plain file name".to_string(),
            });
        }
        Ok(())
    }
}
