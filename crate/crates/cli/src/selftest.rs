//! `errbridge test`: generate, compare with goldens, run the differential
//! and lifetime suites, and compile the headers when a compiler exists.

use std::fmt;
use std::path::{Path, PathBuf};

use errbridge::codegen::{sha256_hex, GenArtifacts, GenOptions};
use errbridge::differential::{check_module, Dispatch};
use errbridge::lifetime::run_sequence;
use errbridge::runtime::Runtime;

use crate::cxx::{self, Mode};
use crate::failure::Failure;
use crate::gen::{build, write_atomically};
use crate::source::load_module;

const GRID_SIZE: usize = 50;
const GRID_SEED: u64 = 0x00eb_0001;
const LIFETIME_SEQUENCES: u64 = 100;
const LIFETIME_STEPS: usize = 200;

pub struct TestConfig<'a> {
    pub input: &'a Path,
    pub workdir: Option<&'a Path>,
    pub golden: Option<&'a Path>,
    pub compiler: Option<&'a str>,
    pub module_path: Option<&'a Path>,
    pub options: &'a GenOptions,
    pub verbose: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageResult {
    Pass(String),
    Fail(String),
    Skipped(String),
}

impl fmt::Display for StageResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, detail) = match self {
            StageResult::Pass(d) => ("PASS", d),
            StageResult::Fail(d) => ("FAIL", d),
            StageResult::Skipped(d) => ("SKIPPED", d),
        };
        if detail.is_empty() {
            f.write_str(tag)
        } else {
            write!(f, "{tag} ({detail})")
        }
    }
}

pub fn run(config: &TestConfig<'_>) -> Result<(), Failure> {
    let module = load_module(config.input)?;
    let temp;
    let workdir: PathBuf = match config.workdir {
        Some(dir) => dir.to_path_buf(),
        None => {
            temp = tempfile::tempdir().map_err(|e| Failure::io("temporary directory", e))?;
            temp.path().to_path_buf()
        }
    };
    let mut failed = 0;
    let mut report = |stage: &str, result: StageResult| {
        if matches!(result, StageResult::Fail(_)) {
            failed += 1;
        }
        println!("stage {stage}: {result}");
    };

    let artifacts = build(&module, config.options)?;
    let written = write_atomically(&workdir, &artifacts)?;
    report("gen", gen_stage(&artifacts, &written)?);

    report("golden", golden_stage(&artifacts, config.golden)?);

    let rt = Runtime::new();
    let diff = check_module(Dispatch::Runtime(&rt), &module, GRID_SIZE, GRID_SEED)
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    if config.verbose {
        for m in &diff.mismatches {
            eprintln!("mismatch: {m}");
        }
    }
    let detail = format!(
        "{} calls: {} returned, {} threw, {} trapped",
        diff.cases, diff.returned, diff.threw, diff.trapped
    );
    report(
        "differential",
        if diff.passed() {
            StageResult::Pass(detail)
        } else {
            StageResult::Fail(format!(
                "{detail}; {} mismatch(es), {} exclusivity violation(s), {} leaked",
                diff.mismatches.len(),
                diff.exclusivity_violations,
                diff.leaked_errors
            ))
        },
    );

    report("lifetime", lifetime_stage());

    let compiler = config.compiler.unwrap_or(cxx::DEFAULT_COMPILER);
    let module_path = config.module_path.unwrap_or(&workdir);
    if cxx::available(compiler) {
        let tu = workdir.join(format!("{}.check.cpp", module.name.as_str()));
        std::fs::write(
            &tu,
            format!("#include \"{}\"\n", artifacts.module_header_name),
        )
        .map_err(|e| Failure::io(tu.display(), e))?;
        for mode in [Mode::Exceptions, Mode::NoExceptions] {
            if config.verbose {
                eprintln!(
                    "{compiler} -std=c++17 -fsyntax-only {} {}",
                    mode.flag(),
                    tu.display()
                );
            }
            let result = match cxx::syntax_check(compiler, &workdir, &tu, mode, module_path) {
                Ok(()) => StageResult::Pass(compiler.to_string()),
                Err(log) => {
                    eprintln!("{log}");
                    StageResult::Fail(format!("{compiler} rejected the headers"))
                }
            };
            report(mode.stage_name(), result);
        }
        let _ = std::fs::remove_file(&tu);
    } else {
        eprintln!("warning: C++ compiler `{compiler}` not found; compile stages skipped");
        for mode in [Mode::Exceptions, Mode::NoExceptions] {
            report(
                mode.stage_name(),
                StageResult::Skipped(format!("no compiler `{compiler}`")),
            );
        }
    }

    if failed == 0 {
        println!("all executed stages passed");
        Ok(())
    } else {
        Err(Failure::Semantic(format!("{failed} stage(s) failed")))
    }
}

fn gen_stage(artifacts: &GenArtifacts, written: &[PathBuf]) -> Result<StageResult, Failure> {
    for ((name, hash), path) in artifacts.manifest.iter().zip(written) {
        let bytes = std::fs::read(path).map_err(|e| Failure::io(path.display(), e))?;
        if &sha256_hex(&bytes) != hash {
            return Ok(StageResult::Fail(format!(
                "{name} does not match its manifest hash"
            )));
        }
    }
    Ok(StageResult::Pass(format!("{} files", written.len())))
}

fn golden_stage(artifacts: &GenArtifacts, golden: Option<&Path>) -> Result<StageResult, Failure> {
    let Some(dir) = golden else {
        return Ok(StageResult::Skipped(
            "no golden directory given".to_string(),
        ));
    };
    if !dir.is_dir() {
        return Err(Failure::Io(format!("{}: not a directory", dir.display())));
    }
    let mut differing = Vec::new();
    for (name, bytes) in artifacts.files() {
        // The registry is a plain serialization; only headers are pinned.
        if name.ends_with(".ebm") && !dir.join(name).exists() {
            continue;
        }
        match std::fs::read(dir.join(name)) {
            Ok(expected) if expected == bytes => {}
            Ok(_) => differing.push(format!("{name} differs")),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                differing.push(format!("{name} missing"))
            }
            Err(e) => return Err(Failure::io(dir.join(name).display(), e)),
        }
    }
    Ok(if differing.is_empty() {
        StageResult::Pass(dir.display().to_string())
    } else {
        StageResult::Fail(differing.join(", "))
    })
}

fn lifetime_stage() -> StageResult {
    for seed in 0..LIFETIME_SEQUENCES {
        if let Err(e) = run_sequence(seed, LIFETIME_STEPS) {
            return StageResult::Fail(format!("seed {seed}: {e}"));
        }
    }
    StageResult::Pass(format!("{LIFETIME_SEQUENCES} sequences"))
}
