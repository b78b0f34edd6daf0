use std::path::Path;

use errbridge::runtime::{Outcome, Runtime, Value};

use crate::failure::Failure;
use crate::source::load_module;

pub fn run(input: &Path, function: &str, args: &[String]) -> Result<(), Failure> {
    let module = load_module(input)?;
    let (index, func) = module.find_function(function).ok_or_else(|| {
        Failure::Semantic(format!(
            "no function `{function}` in module {}",
            module.name
        ))
    })?;
    if args.len() != func.params.len() {
        return Err(Failure::Semantic(format!(
            "`{function}` takes {} argument(s), got {}",
            func.params.len(),
            args.len()
        )));
    }
    let values = func
        .params
        .iter()
        .zip(args)
        .map(|(p, text)| {
            Value::parse_as(text, p.ty).ok_or_else(|| {
                Failure::Semantic(format!(
                    "argument `{}`: cannot read `{text}` as {}",
                    p.name, p.ty
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let rt = Runtime::new();
    let id = rt
        .load_validated(module.clone())
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    let outcome = rt
        .invoke_outcome(id, index, &values)
        .map_err(|t| Failure::Trap(t.to_string()))?;
    match outcome {
        Outcome::Returned(v) => println!("value: {v}"),
        Outcome::Threw(e) => println!("error: {}.{}", e.enum_name, e.case_name),
    }
    println!("live_errors: {}", rt.live_errors());
    Ok(())
}
