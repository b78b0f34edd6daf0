use std::path::Path;

use errbridge::idl::{parse_source, validate_with_warnings, ValidatedModule};

use crate::failure::Failure;

/// Reads and validates a `.eb` file. Diagnostics, warnings included, go to
/// stderr as `file:line:col: code: message`.
pub fn load_module(path: &Path) -> Result<ValidatedModule, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path.display(), e))?;
    let file = path.display().to_string();
    let result = parse_source(&text).and_then(validate_with_warnings);
    match result {
        Ok((module, warnings)) => {
            for w in &warnings {
                eprintln!("{}", w.render(&file));
            }
            Ok(module)
        }
        Err(diags) => {
            for d in diags.iter() {
                eprintln!("{}", d.render(&file));
            }
            let n = diags.errors().count();
            Err(Failure::Semantic(format!("{file}: {n} error(s)")))
        }
    }
}
