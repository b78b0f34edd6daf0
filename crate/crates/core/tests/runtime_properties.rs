//! Properties of the C ABI dispatcher over the fixture corpus.

use std::sync::OnceLock;

use errbridge::idl::{compile_source, serialize_module, ScalarType, ValidatedModule};
use errbridge::runtime::ffi::{
    eb_invoke, eb_live_errors, eb_load_module, STATUS_RETURNED, STATUS_THREW,
};
use errbridge::runtime::{eval_function, EbValue, ErrorHandle, Runtime, Value};
use proptest::prelude::*;

const FIXTURES: &[&str] = &[
    include_str!("fixtures/functions.eb"),
    include_str!("fixtures/bank.eb"),
    include_str!("fixtures/geometry.eb"),
    include_str!("fixtures/logic.eb"),
    include_str!("fixtures/network.eb"),
    include_str!("fixtures/stats.eb"),
];

fn loaded() -> &'static [(u32, ValidatedModule)] {
    static LOADED: OnceLock<Vec<(u32, ValidatedModule)>> = OnceLock::new();
    LOADED.get_or_init(|| {
        FIXTURES
            .iter()
            .map(|src| {
                let m = compile_source(src).unwrap();
                let bytes = serialize_module(&m);
                let mut id = 0;
                let status = unsafe { eb_load_module(bytes.as_ptr(), bytes.len(), &mut id) };
                assert_eq!(status, 0);
                (id, m)
            })
            .collect()
    })
}

fn value_of(ty: ScalarType, seed: i64) -> Value {
    match ty {
        ScalarType::Int => Value::Int(seed % 200 - 100),
        ScalarType::Float => Value::Float((seed % 800 - 400) as f64 / 4.0),
        ScalarType::Bool => Value::Bool(seed % 2 == 0),
        ScalarType::Unit => Value::Unit,
    }
}

proptest! {
    #[test]
    fn invoke_sets_exactly_one_output(
        module in 0..FIXTURES.len(),
        func in any::<prop::sample::Index>(),
        seeds in proptest::collection::vec(0i64..1_000_000, 4),
    ) {
        let (id, m) = &loaded()[module];
        let index = func.index(m.functions.len());
        let f = &m.functions[index];
        let args: Vec<Value> = f.params.iter().zip(&seeds).map(|(p, s)| value_of(p.ty, *s)).collect();
        let cells: Vec<EbValue> = args.iter().map(|&v| v.into()).collect();

        // Sentinel return cell: a tag no real value uses.
        let sentinel = EbValue { tag: 0xee, payload: [0xee; 8] };
        let mut err = 0u64;
        let mut ret = sentinel;
        let status = unsafe {
            eb_invoke(*id, index as u32, cells.as_ptr(), cells.len(), &mut err, &mut ret)
        };
        match status {
            STATUS_RETURNED => {
                prop_assert_eq!(err, 0);
                prop_assert_ne!(ret.tag, 0xee);
            }
            STATUS_THREW => {
                prop_assert_ne!(err, 0);
                prop_assert_eq!(ret.tag, 0xee);
                let rt = Runtime::global();
                prop_assert_eq!(rt.refcount(ErrorHandle(err)), Some(1));
                rt.release(ErrorHandle(err)).unwrap();
            }
            other => prop_assert!(false, "unexpected status {other}"),
        }
        // Only this test touches the global runtime.
        prop_assert_eq!(eb_live_errors(), 0);
    }

    #[test]
    fn interpreter_is_pure(
        module in 0..FIXTURES.len(),
        func in any::<prop::sample::Index>(),
        seeds in proptest::collection::vec(0i64..1_000_000, 4),
    ) {
        let (_, m) = &loaded()[module];
        let f = &m.functions[func.index(m.functions.len())];
        let args: Vec<Value> = f.params.iter().zip(&seeds).map(|(p, s)| value_of(p.ty, *s)).collect();
        prop_assert_eq!(eval_function(f, &args), eval_function(f, &args));
    }
}
