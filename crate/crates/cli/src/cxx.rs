//! Syntax-only compilation of generated headers with an external C++
//! compiler.

use std::path::Path;
use std::process::Command;

pub const DEFAULT_COMPILER: &str = "c++";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exceptions,
    NoExceptions,
}

impl Mode {
    pub fn flag(self) -> &'static str {
        match self {
            Mode::Exceptions => "-fexceptions",
            Mode::NoExceptions => "-fno-exceptions",
        }
    }

    pub fn stage_name(self) -> &'static str {
        match self {
            Mode::Exceptions => "compile-exceptions",
            Mode::NoExceptions => "compile-no-exceptions",
        }
    }
}

/// True when `compiler --version` runs and succeeds.
pub fn available(compiler: &str) -> bool {
    Command::new(compiler)
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

/// Compiles `tu` with the headers in `include_dir` and returns the
/// compiler's stderr on failure.
pub fn syntax_check(
    compiler: &str,
    include_dir: &Path,
    tu: &Path,
    mode: Mode,
    module_path: &Path,
) -> Result<(), String> {
    let output = Command::new(compiler)
        .args([
            "-std=c++17",
            "-Wall",
            "-Wextra",
            "-fsyntax-only",
            mode.flag(),
        ])
        .arg(format!("-I{}", include_dir.display()))
        .arg(tu)
        .env("ERRBRIDGE_MODULE_PATH", module_path)
        .output()
        .map_err(|e| format!("cannot run {compiler}: {e}"))?;
    if output.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&output.stderr).into_owned())
    }
}
