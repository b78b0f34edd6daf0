//! Differential checking: every function of a module is run over an
//! argument grid twice, once by the reference interpreter and once through
//! the runtime dispatcher with the result wrapped in an [`ExpectedModel`],
//! and the two results are compared.

use std::ffi::CString;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expected::ExpectedModel;
use crate::idl::{serialize_module, DeserializeError, FunctionDecl, ScalarType, ValidatedModule};
use crate::runtime::ffi::{self, EbTypeId};
use crate::runtime::{
    eval_function, EbValue, ErrorHandle, InvokeStatus, LoadError, ModuleId, Outcome, Runtime,
    ThrownError, Value,
};

const INT_SAMPLES: &[i64] = &[-7, -2, -1, 0, 1, 2, 3, 9, 81, 100];
const FLOAT_SAMPLES: &[f64] = &[-300.0, -1.5, 0.0, 0.5, 2.0, 100.0];
/// Upper bound on the exhaustive part of a grid.
const PRODUCT_CAP: usize = 4096;

/// What a single call produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Returned(Value),
    Threw(ThrownError),
    Trapped,
}

impl From<Outcome> for Verdict {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Returned(v) => Verdict::Returned(v),
            Outcome::Threw(e) => Verdict::Threw(e),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Returned(v) => write!(f, "value: {v}"),
            Verdict::Threw(e) => write!(f, "error: {}.{}", e.enum_name, e.case_name),
            Verdict::Trapped => f.write_str("trap"),
        }
    }
}

/// How the observed side reaches the dispatcher.
#[derive(Clone, Copy)]
pub enum Dispatch<'a> {
    /// Call [`Runtime::invoke`] directly.
    Runtime(&'a Runtime),
    /// Go through the exported C symbols, which act on [`Runtime::global`].
    CAbi,
}

impl Dispatch<'_> {
    fn runtime(&self) -> &Runtime {
        match self {
            Dispatch::Runtime(rt) => rt,
            Dispatch::CAbi => Runtime::global(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub function: String,
    pub args: Vec<Value>,
    pub expected: Verdict,
    pub observed: Verdict,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(Value::to_string).collect();
        write!(
            f,
            "{}({}): interpreter gave `{}`, dispatcher gave `{}`",
            self.function,
            args.join(", "),
            self.expected,
            self.observed
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiffReport {
    /// Calls compared.
    pub cases: usize,
    /// Smallest grid used for any function.
    pub min_grid: usize,
    pub returned: usize,
    pub threw: usize,
    pub trapped: usize,
    /// Calls whose Expected model was not exactly one of value / error.
    pub exclusivity_violations: usize,
    pub mismatches: Vec<Mismatch>,
    /// Live error boxes left behind by the run.
    pub leaked_errors: u64,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.exclusivity_violations == 0 && self.leaked_errors == 0
    }
}

/// Builds at least `min_len` argument tuples for `func`: the full product of
/// a fixed sample set per parameter type (capped), padded with seeded random
/// tuples. Same inputs, same grid.
pub fn argument_grid(func: &FunctionDecl, min_len: usize, seed: u64) -> Vec<Vec<Value>> {
    let samples: Vec<Vec<Value>> = func.params.iter().map(|p| samples_for(p.ty)).collect();
    let mut grid: Vec<Vec<Value>> = vec![Vec::new()];
    for column in &samples {
        if grid.len() * column.len() > PRODUCT_CAP {
            break;
        }
        grid = grid
            .iter()
            .flat_map(|prefix| {
                column.iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(*v);
                    t
                })
            })
            .collect();
    }
    // Columns skipped by the cap are filled from the first sample.
    for t in &mut grid {
        while t.len() < samples.len() {
            t.push(samples[t.len()][0]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while grid.len() < min_len.max(1) {
        grid.push(
            func.params
                .iter()
                .map(|p| random_value(&mut rng, p.ty))
                .collect(),
        );
    }
    grid
}

fn samples_for(ty: ScalarType) -> Vec<Value> {
    match ty {
        ScalarType::Int => INT_SAMPLES.iter().map(|&i| Value::Int(i)).collect(),
        ScalarType::Float => FLOAT_SAMPLES.iter().map(|&x| Value::Float(x)).collect(),
        ScalarType::Bool => vec![Value::Bool(false), Value::Bool(true)],
        ScalarType::Unit => vec![Value::Unit],
    }
}

fn random_value(rng: &mut ChaCha8Rng, ty: ScalarType) -> Value {
    match ty {
        ScalarType::Int => Value::Int(rng.gen_range(-1000..=1000)),
        // Quarter steps keep the values exactly representable.
        ScalarType::Float => Value::Float(f64::from(rng.gen_range(-2000..=2000)) / 4.0),
        ScalarType::Bool => Value::Bool(rng.gen()),
        ScalarType::Unit => Value::Unit,
    }
}

/// Loads `module` and compares the interpreter with the dispatcher over a
/// grid of at least `min_grid` tuples per function.
pub fn check_module(
    dispatch: Dispatch<'_>,
    module: &ValidatedModule,
    min_grid: usize,
    seed: u64,
) -> Result<DiffReport, LoadError> {
    let rt = dispatch.runtime();
    let module_id = load(dispatch, module)?;
    let live_before = rt.live_errors();
    let mut report = DiffReport {
        min_grid: usize::MAX,
        ..DiffReport::default()
    };
    for (index, func) in module.functions.iter().enumerate() {
        let grid = argument_grid(func, min_grid, seed ^ index as u64);
        report.min_grid = report.min_grid.min(grid.len());
        for args in grid {
            let expected = match eval_function(func, &args) {
                Ok(o) => Verdict::from(o),
                Err(_) => Verdict::Trapped,
            };
            let observed = observe(dispatch, module_id, index, &args, &mut report);
            report.cases += 1;
            match &expected {
                Verdict::Returned(_) => report.returned += 1,
                Verdict::Threw(_) => report.threw += 1,
                Verdict::Trapped => report.trapped += 1,
            }
            if expected != observed {
                report.mismatches.push(Mismatch {
                    function: func.name.as_str().to_string(),
                    args,
                    expected,
                    observed,
                });
            }
        }
    }
    if report.min_grid == usize::MAX {
        report.min_grid = 0;
    }
    report.leaked_errors = rt.live_errors().saturating_sub(live_before);
    Ok(report)
}

fn load(dispatch: Dispatch<'_>, module: &ValidatedModule) -> Result<ModuleId, LoadError> {
    match dispatch {
        Dispatch::Runtime(rt) => rt.load_validated(module.clone()),
        Dispatch::CAbi => {
            let bytes = serialize_module(module);
            let mut id = 0u32;
            // SAFETY: `bytes` and `id` are live for the call.
            let status = unsafe { ffi::eb_load_module(bytes.as_ptr(), bytes.len(), &mut id) };
            match status {
                ffi::LOAD_OK => Ok(ModuleId(id)),
                ffi::LOAD_CONFLICT => Err(LoadError::Conflict(module.name.as_str().to_string())),
                _ => Err(LoadError::Malformed(DeserializeError::Malformed {
                    offset: 0,
                    message: format!("eb_load_module returned {status}"),
                })),
            }
        }
    }
}

fn observe(
    dispatch: Dispatch<'_>,
    module_id: ModuleId,
    index: usize,
    args: &[Value],
    report: &mut DiffReport,
) -> Verdict {
    let rt = dispatch.runtime();
    let model = match dispatch {
        Dispatch::Runtime(rt) => {
            let mut err = ErrorHandle::NULL;
            let mut ret = Value::Unit;
            match rt.invoke(module_id, index, args, &mut err, &mut ret) {
                Ok(InvokeStatus::Returned) => ExpectedModel::from_value(rt, ret),
                Ok(InvokeStatus::Threw) => ExpectedModel::from_error(rt, err),
                Err(_) => return Verdict::Trapped,
            }
        }
        Dispatch::CAbi => {
            let cells: Vec<EbValue> = args.iter().map(|&v| EbValue::from(v)).collect();
            let mut err = 0u64;
            let mut ret = EbValue::from(Value::Unit);
            // SAFETY: all pointers refer to live locals sized as declared.
            let status = unsafe {
                ffi::eb_invoke(
                    module_id.0,
                    index as u32,
                    cells.as_ptr(),
                    cells.len(),
                    &mut err,
                    &mut ret,
                )
            };
            match status {
                ffi::STATUS_RETURNED => match Value::try_from(ret) {
                    Ok(v) => ExpectedModel::from_value(rt, v),
                    Err(_) => return Verdict::Trapped,
                },
                ffi::STATUS_THREW => ExpectedModel::from_error(rt, ErrorHandle(err)),
                _ => return Verdict::Trapped,
            }
        }
    };
    if model.has_value() == model.holds_error() {
        report.exclusivity_violations += 1;
    }
    if model.has_value() {
        return Verdict::Returned(model.value());
    }
    let handle = model.error();
    let Ok(boxed) = rt.error_box(handle) else {
        return Verdict::Trapped;
    };
    let type_id = boxed.type_id().clone();
    let verdict = Verdict::Threw(ThrownError {
        enum_name: type_id.enum_name().to_string(),
        case_name: boxed.message().to_string(),
    });
    drop(boxed);
    // The dynamic cast must agree with the box about its own type.
    if let Dispatch::CAbi = dispatch {
        let module = CString::new(type_id.module()).expect("identifier has no NUL");
        let name = CString::new(type_id.enum_name()).expect("identifier has no NUL");
        let target = EbTypeId {
            hash: type_id.hash(),
            module_name: module.as_ptr(),
            enum_name: name.as_ptr(),
        };
        // SAFETY: `target` and its strings outlive the call.
        let cast = unsafe { ffi::eb_error_dyncast(handle.0, &target) };
        if !cast.matched {
            return Verdict::Trapped;
        }
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idl::compile_source;

    #[test]
    fn grid_is_deterministic_and_large_enough() {
        let m = compile_source("module M\nfunc f(x: Int) -> Int { return x }").unwrap();
        let f = &m.functions[0];
        let a = argument_grid(f, 50, 7);
        assert_eq!(a, argument_grid(f, 50, 7));
        assert_eq!(a.len(), 50);
        assert!(a.iter().all(|t| t.len() == 1));
        assert_eq!(
            &a[..INT_SAMPLES.len()],
            &INT_SAMPLES
                .iter()
                .map(|&i| vec![Value::Int(i)])
                .collect::<Vec<_>>()[..]
        );
    }

    #[test]
    fn grid_covers_full_product_when_small() {
        let m = compile_source("module M\nfunc f(a: Int, b: Bool, c: Float) -> Int { return a }")
            .unwrap();
        let grid = argument_grid(&m.functions[0], 50, 1);
        assert_eq!(grid.len(), INT_SAMPLES.len() * 2 * FLOAT_SAMPLES.len());
    }

    #[test]
    fn nullary_function_still_gets_a_grid() {
        let m = compile_source("module M\nfunc f() -> Int { return 1 }").unwrap();
        let grid = argument_grid(&m.functions[0], 50, 1);
        assert_eq!(grid.len(), 50);
        assert!(grid.iter().all(Vec::is_empty));
    }

    #[test]
    fn division_agrees_in_process() {
        let rt = Runtime::new();
        let m = compile_source(include_str!("../tests/fixtures/functions.eb")).unwrap();
        let report = check_module(Dispatch::Runtime(&rt), &m, 50, 3).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert!(report.cases >= 100);
        assert_eq!(rt.live_errors(), 0);
    }
}
