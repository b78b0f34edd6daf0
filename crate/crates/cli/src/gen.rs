use std::path::{Path, PathBuf};

use errbridge::codegen::{generate, GenArtifacts, GenOptions};
use errbridge::idl::ValidatedModule;

use crate::failure::Failure;
use crate::source::load_module;

pub fn run(input: &Path, out: &Path, options: &GenOptions) -> Result<(), Failure> {
    let module = load_module(input)?;
    let artifacts = build(&module, options)?;
    let written = write_atomically(out, &artifacts)?;
    for ((_, hash), path) in artifacts.manifest.iter().zip(&written) {
        println!("{hash}  {}", path.display());
    }
    Ok(())
}

pub fn build(module: &ValidatedModule, options: &GenOptions) -> Result<GenArtifacts, Failure> {
    generate(module, options).map_err(|e| Failure::Semantic(e.to_string()))
}

/// Writes every artifact into a staging directory inside `out`, then renames
/// the files into place. Nothing lands in `out` unless all writes succeeded.
pub fn write_atomically(out: &Path, artifacts: &GenArtifacts) -> Result<Vec<PathBuf>, Failure> {
    std::fs::create_dir_all(out).map_err(|e| Failure::io(out.display(), e))?;
    let staging = tempfile::Builder::new()
        .prefix(".errbridge-gen-")
        .tempdir_in(out)
        .map_err(|e| Failure::io(out.display(), e))?;
    let files = artifacts.files();
    for (name, bytes) in files {
        let path = staging.path().join(name);
        std::fs::write(&path, bytes).map_err(|e| Failure::io(path.display(), e))?;
    }
    let mut placed = Vec::new();
    for (name, _) in files {
        let target = out.join(name);
        if let Err(e) = std::fs::rename(staging.path().join(name), &target) {
            for p in &placed {
                let _ = std::fs::remove_file(p);
            }
            return Err(Failure::io(target.display(), e));
        }
        placed.push(target);
    }
    Ok(placed)
}
