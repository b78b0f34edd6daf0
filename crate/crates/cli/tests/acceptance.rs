//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use errbridge::codegen::{emit_module_header, emit_support_header, GenOptions};
use errbridge::differential::{check_module, Dispatch};
use errbridge::idl::{compile_source, ValidatedModule};
use errbridge::lifetime::run_sequence;
use errbridge::runtime::{eval_function, Outcome, ThrownError, Value};

const INTERPRETER_BUDGET: Duration = Duration::from_secs(1);
const LIFETIME_BUDGET: Duration = Duration::from_secs(5);
const LIFETIME_SEQUENCES: u64 = 1000;
const LIFETIME_STEPS: usize = 200;
const MIN_MODULES: usize = 10;
const MIN_GRID: usize = 50;
const ORACLE_SEED: u64 = 0xacce_97ed;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn fixture(name: &str) -> PathBuf {
    core_dir().join("tests/fixtures").join(name)
}

fn division() -> ValidatedModule {
    let src = std::fs::read_to_string(fixture("functions.eb")).expect("division fixture");
    compile_source(&src).expect("division fixture is valid")
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn interpreter_fixtures() -> Verdict {
    let start = Instant::now();
    let module = division();
    let (_, func) = module
        .find_function("division")
        .ok_or("no division function")?;
    let threw = |case: &str| {
        Outcome::Threw(ThrownError {
            enum_name: "DivByZero".into(),
            case_name: case.into(),
        })
    };
    let cases = [
        ((0, 0), threw("bothAreZero")),
        ((1, 0), threw("divisorIsZero")),
        ((4, 2), Outcome::Returned(Value::Float(2.0))),
    ];
    for ((a, b), want) in cases {
        let got = eval_function(func, &[Value::Int(a), Value::Int(b)])
            .map_err(|t| format!("division({a},{b}) trapped: {t}"))?;
        ensure(got == want, || {
            format!("division({a},{b}) = {got:?}, want {want:?}")
        })?;
        if let Outcome::Returned(Value::Float(x)) = got {
            ensure(x.to_bits() == 2.0f64.to_bits(), || {
                format!("{x} is not exactly 2.0")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < INTERPRETER_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("3 cases in {elapsed:?}"))
}

fn golden_headers() -> Verdict {
    let dir = core_dir().join("tests/golden/Functions");
    let read =
        |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"));
    let options = GenOptions::default();
    let support = emit_support_header(&options);
    let header = emit_module_header(&division(), &options).map_err(|e| e.to_string())?;
    ensure(support == read("errbridge_support.h")?, || {
        "support header differs from golden".into()
    })?;
    ensure(header == read("Functions.h")?, || {
        "module header differs from golden".into()
    })?;

    let gate_exceptions = "#ifdef __cpp_exceptions\ntemplate<class T>\nusing ThrowingResult = T;";
    let gate_expected = "#else\ntemplate<class T>\nusing ThrowingResult = Swift::Expected<T>;";
    ensure(support.contains(gate_exceptions), || {
        "missing exceptions alias".into()
    })?;
    ensure(support.contains(gate_expected), || {
        "missing Expected alias".into()
    })?;

    let thunk_start = header
        .find("inline Swift::ThrowingResult<double> division(")
        .ok_or("no throwing thunk for division")?;
    let thunk = &header[thunk_start..];
    let thunk = &thunk[..thunk.find("\n}\n").ok_or("unterminated thunk")?];
    for (needle, n) in [
        ("void* opaqueError = nullptr;", 1),
        ("if (opaqueError != nullptr)", 1),
        ("#ifdef __cpp_exceptions", 1),
        ("throw (Swift::Error(opaqueError));", 1),
        ("#else", 1),
        (
            "return EB_RETURN_THUNK(double, Swift::Error(opaqueError));",
            1,
        ),
        ("return EB_RETURN_THUNK(double, returnValue);", 1),
    ] {
        let count = thunk.matches(needle).count();
        ensure(count == n, || {
            format!("`{needle}` appears {count} times in the thunk")
        })?;
    }
    Ok("support + module headers byte-identical; gate, null check, both branches".into())
}

fn lifetime_suite() -> Verdict {
    let start = Instant::now();
    let mut casts = 0;
    let mut expected = 0;
    for seed in 0..LIFETIME_SEQUENCES {
        let stats = run_sequence(seed, LIFETIME_STEPS).map_err(|e| format!("seed {seed}: {e}"))?;
        casts += stats.casts;
        expected += stats.expected_built;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < LIFETIME_BUDGET, || format!("took {elapsed:?}"))?;
    ensure(casts > 0 && expected > 0, || {
        "sequences exercised nothing".into()
    })?;
    Ok(format!(
        "{LIFETIME_SEQUENCES} sequences x {LIFETIME_STEPS} steps, {casts} casts, \
         {expected} Expected values, in {elapsed:?}"
    ))
}

fn oracle_equivalence() -> Verdict {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(core_dir().join("tests/fixtures"))
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "eb"))
        .collect();
    paths.sort();
    let mut modules = 0;
    let mut cases = 0;
    for path in paths {
        let src = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let module = compile_source(&src).map_err(|d| format!("{}: {d}", path.display()))?;
        if module.functions.is_empty() {
            continue;
        }
        let report = check_module(Dispatch::CAbi, &module, MIN_GRID, ORACLE_SEED)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let name = module.name.as_str();
        ensure(report.min_grid >= MIN_GRID, || {
            format!("{name}: grid of {} tuples", report.min_grid)
        })?;
        if let Some(m) = report.mismatches.first() {
            return Err(format!("{name}: {m}"));
        }
        ensure(report.exclusivity_violations == 0, || {
            format!(
                "{name}: {} exclusivity violations",
                report.exclusivity_violations
            )
        })?;
        ensure(report.leaked_errors == 0, || {
            format!("{name}: {} leaked errors", report.leaked_errors)
        })?;
        modules += 1;
        cases += report.cases;
    }
    ensure(modules >= MIN_MODULES, || format!("only {modules} modules"))?;
    Ok(format!(
        "{modules} modules, {cases} calls through eb_invoke"
    ))
}

fn cli_contract() -> Verdict {
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = work.path();
    let bin = env!("CARGO_BIN_EXE_errbridge");
    let div = fixture("functions.eb").display().to_string();
    let traps = fixture("traps.eb").display().to_string();
    std::fs::write(
        dir.join("bad.eb"),
        "module M\nenum E : Error { case a }\nfunc f() -> Int { throw E.a }\n",
    )
    .map_err(|e| e.to_string())?;
    std::fs::write(dir.join("not-a-dir"), "").map_err(|e| e.to_string())?;

    let exit = |args: &[&str]| -> Result<(i32, String), String> {
        let o = Command::new(bin)
            .current_dir(dir)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let code = o.status.code().ok_or("killed by signal")?;
        Ok((code, String::from_utf8_lossy(&o.stdout).into_owned()))
    };
    let no_cxx = "no-such-compiler-errbridge";
    let expectations: &[(&[&str], i32)] = &[
        (&["check", &div], 0),
        (&["check", "bad.eb"], 1),
        (&["check", "missing.eb"], 2),
        (&["gen", &div, "--out", "g1"], 0),
        (&["gen", "bad.eb", "--out", "g-bad"], 1),
        (&["gen", &div, "--out", "not-a-dir"], 2),
        (&["run", &div, "division", "0", "0"], 0),
        (&["run", &div, "division", "4", "2"], 0),
        (&["run", &traps, "unguardedDivide", "1", "0"], 3),
        (&["test", &div, "--compiler", no_cxx], 0),
    ];
    for (args, want) in expectations {
        let (code, _) = exit(args)?;
        ensure(code == *want, || {
            format!("`errbridge {}` exited {code}, want {want}", args.join(" "))
        })?;
    }

    let (_, out) = exit(&["run", &div, "division", "1", "0"])?;
    ensure(
        out == "error: DivByZero.divisorIsZero\nlive_errors: 0\n",
        || format!("run printed {out:?}"),
    )?;

    let bad_out = dir.join("g-bad");
    ensure(
        !bad_out.exists() || std::fs::read_dir(&bad_out).is_ok_and(|mut d| d.next().is_none()),
        || "failed gen left files behind".into(),
    )?;

    exit(&["gen", &div, "--out", "g2"])?;
    let mut files = 0;
    for entry in std::fs::read_dir(dir.join("g1")).map_err(|e| e.to_string())? {
        let name = entry.map_err(|e| e.to_string())?.file_name();
        let a = std::fs::read(dir.join("g1").join(&name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dir.join("g2").join(&name)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name:?} differs between runs"))?;
        files += 1;
    }
    ensure(files == 3, || format!("gen wrote {files} files"))?;
    Ok(format!(
        "{} exit codes, atomic and deterministic gen",
        expectations.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 5] = [
        ("interpreter fixtures", interpreter_fixtures),
        ("golden headers", golden_headers),
        ("lifetime property suite", lifetime_suite),
        ("oracle equivalence", oracle_equivalence),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {}. {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
