//! Property tests over randomly generated, well-typed `.eb` sources.

use errbridge::idl::{
    compile_source, deserialize_module, parse_source, serialize_module, tokenize,
};
use proptest::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Ty {
    Int,
    Float,
    Bool,
}

impl Ty {
    fn name(self) -> &'static str {
        match self {
            Ty::Int => "Int",
            Ty::Float => "Float",
            Ty::Bool => "Bool",
        }
    }
}

fn ty() -> impl Strategy<Value = Ty> {
    prop_oneof![Just(Ty::Int), Just(Ty::Float), Just(Ty::Bool)]
}

/// An expression of type `t` over `params`.
fn expr(t: Ty, params: Vec<(String, Ty)>, depth: u32) -> BoxedStrategy<String> {
    let vars: Vec<String> = params
        .iter()
        .filter(|(_, pt)| *pt == t)
        .map(|(n, _)| n.clone())
        .collect();
    let leaf: BoxedStrategy<String> = match t {
        Ty::Int => (-50i64..50).prop_map(|v| v.to_string()).boxed(),
        Ty::Float => (-200i32..200)
            .prop_map(|v| format!("{:.2}", f64::from(v) / 8.0))
            .boxed(),
        Ty::Bool => any::<bool>().prop_map(|b| b.to_string()).boxed(),
    };
    let leaf = if vars.is_empty() {
        leaf
    } else {
        prop_oneof![leaf, proptest::sample::select(vars)].boxed()
    };
    if depth == 0 {
        return leaf;
    }
    let sub = |t| expr(t, params.clone(), depth - 1);
    match t {
        Ty::Int => prop_oneof![
            2 => leaf,
            1 => (sub(Ty::Int), prop_oneof![Just("+"), Just("-"), Just("*"), Just("/")], sub(Ty::Int))
                .prop_map(|(a, op, b)| format!("({a} {op} {b})")),
        ]
        .boxed(),
        Ty::Float => prop_oneof![
            2 => leaf,
            1 => (sub(Ty::Float), prop_oneof![Just("+"), Just("-"), Just("*"), Just("/")], sub(Ty::Float))
                .prop_map(|(a, op, b)| format!("({a} {op} {b})")),
            1 => sub(Ty::Int).prop_map(|a| format!("Float({a})")),
        ]
        .boxed(),
        Ty::Bool => prop_oneof![
            2 => leaf,
            1 => (sub(Ty::Int), prop_oneof![Just("=="), Just("!="), Just("<"), Just("<="), Just(">"), Just(">=")], sub(Ty::Int))
                .prop_map(|(a, op, b)| format!("{a} {op} {b}")),
            1 => (sub(Ty::Bool), prop_oneof![Just("&&"), Just("||")], sub(Ty::Bool))
                .prop_map(|(a, op, b)| format!("({a} {op} {b})")),
        ]
        .boxed(),
    }
}

#[derive(Debug, Clone)]
struct FnSpec {
    params: Vec<Ty>,
    ret: Ty,
    throws: bool,
}

fn fn_spec() -> impl Strategy<Value = FnSpec> {
    (proptest::collection::vec(ty(), 0..4), ty(), any::<bool>()).prop_map(
        |(params, ret, throws)| FnSpec {
            params,
            ret,
            throws,
        },
    )
}

/// Renders one function whose body is `if cond { throw | return } return e`.
fn function(
    index: usize,
    spec: FnSpec,
    enums: Vec<(String, Vec<String>)>,
) -> BoxedStrategy<String> {
    let params: Vec<(String, Ty)> = spec
        .params
        .iter()
        .enumerate()
        .map(|(i, t)| (format!("p{i}"), *t))
        .collect();
    let signature = format!(
        "func f{index}({}){} -> {}",
        params
            .iter()
            .map(|(n, t)| format!("{n}: {}", t.name()))
            .collect::<Vec<_>>()
            .join(", "),
        if spec.throws { " throws" } else { "" },
        spec.ret.name()
    );
    let early: BoxedStrategy<String> = if spec.throws && !enums.is_empty() {
        proptest::sample::select(enums)
            .prop_flat_map(|(e, cases)| {
                proptest::sample::select(cases).prop_map(move |c| format!("throw {e}.{c}"))
            })
            .boxed()
    } else {
        expr(spec.ret, params.clone(), 1)
            .prop_map(|e| format!("return {e}"))
            .boxed()
    };
    (
        expr(Ty::Bool, params.clone(), 2),
        early,
        expr(spec.ret, params, 2),
    )
        .prop_map(move |(cond, early, last)| {
            format!("{signature} {{\n    if {cond} {{\n        {early}\n    }}\n    return {last}\n}}\n")
        })
        .boxed()
}

fn module_source() -> impl Strategy<Value = String> {
    let enums = proptest::collection::vec(1usize..5, 0..3).prop_map(|sizes| {
        sizes
            .into_iter()
            .enumerate()
            .map(|(i, n)| {
                (
                    format!("Err{i}"),
                    (0..n).map(|j| format!("case{i}x{j}")).collect(),
                )
            })
            .collect::<Vec<(String, Vec<String>)>>()
    });
    (enums, proptest::collection::vec(fn_spec(), 0..4)).prop_flat_map(|(enums, specs)| {
        let fns: Vec<BoxedStrategy<String>> = specs
            .into_iter()
            .enumerate()
            .map(|(i, s)| function(i, s, enums.clone()))
            .collect();
        fns.prop_map(move |fns| {
            let mut src = String::from("module Generated\n\n");
            for (name, cases) in &enums {
                src.push_str(&format!("enum {name} : Error {{\n"));
                for c in cases {
                    src.push_str(&format!("    case {c}\n"));
                }
                src.push_str("}\n\n");
            }
            for f in fns {
                src.push_str(&f);
                src.push('\n');
            }
            src
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_sources_validate(src in module_source()) {
        let result = compile_source(&src);
        prop_assert!(result.is_ok(), "{}\n{:?}", src, result.err());
    }

    #[test]
    fn serialization_round_trips(src in module_source()) {
        let m = compile_source(&src).unwrap();
        let bytes = serialize_module(&m);
        let back = deserialize_module(&bytes).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_module(&back), bytes);
    }

    #[test]
    fn parsing_is_deterministic(src in module_source()) {
        prop_assert_eq!(parse_source(&src).unwrap(), parse_source(&src).unwrap());
    }

    #[test]
    fn printed_source_reparses_to_the_same_module(src in module_source()) {
        let m = parse_source(&src).unwrap();
        prop_assert_eq!(parse_source(&m.to_source()).unwrap(), m);
    }

    #[test]
    fn case_indices_follow_declaration_order(src in module_source()) {
        let m = compile_source(&src).unwrap();
        let back = deserialize_module(&serialize_module(&m)).unwrap();
        for (e, e2) in m.enums.iter().zip(&back.enums) {
            for (i, c) in e.cases.iter().enumerate() {
                prop_assert_eq!(e.case_index(c.as_str()), Some(i));
                prop_assert_eq!(e2.case_index(c.as_str()), Some(i));
            }
        }
    }

    #[test]
    fn diagnostics_point_inside_the_source(
        src in module_source(),
        at in any::<prop::sample::Index>(),
        junk in prop::sample::select(vec!["@", "{", "}", "throw", "->", "", "\n", "Int", "(", "#"]),
        delete in 0usize..4,
    ) {
        let mut bytes: Vec<char> = src.chars().collect();
        let pos = at.index(bytes.len() + 1);
        let end = (pos + delete).min(bytes.len());
        bytes.splice(pos..end, junk.chars());
        let mutated: String = bytes.into_iter().collect();
        let lines: Vec<&str> = mutated.split('\n').collect();
        let diags = match tokenize(&mutated) {
            Err(d) => d,
            Ok(_) => match compile_source(&mutated) {
                Err(d) => d,
                Ok(_) => return Ok(()),
            },
        };
        for d in diags.iter() {
            let line = d.span.line as usize;
            prop_assert!(line >= 1 && line <= lines.len(), "{d} in\n{mutated}");
            let width = lines[line - 1].chars().count();
            prop_assert!(d.span.column >= 1 && d.span.column as usize <= width + 1, "{d} in\n{mutated}");
        }
    }
}
