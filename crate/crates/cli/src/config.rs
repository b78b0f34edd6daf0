//! Optional `errbridge.toml`. Every key mirrors a command-line flag; flags
//! take precedence.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::failure::Failure;

pub const FILE_NAME: &str = "errbridge.toml";

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub namespace: Option<String>,
    pub macro_prefix: Option<String>,
    pub support_header: Option<String>,
    pub line_comments: Option<bool>,
    pub compiler: Option<String>,
    pub module_path: Option<PathBuf>,
    pub golden: Option<PathBuf>,
    pub verbose: Option<bool>,
}

impl FileConfig {
    /// Reads `errbridge.toml` from `dir`; a missing file is an empty config.
    pub fn load_from(dir: &Path) -> Result<Self, Failure> {
        let path = dir.join(FILE_NAME);
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                Self::parse(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(FileConfig::default()),
            Err(e) => Err(Failure::io(path.display(), e)),
        }
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}
