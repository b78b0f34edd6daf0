use std::path::Path;

use crate::failure::Failure;
use crate::source::load_module;

pub fn run(input: &Path) -> Result<(), Failure> {
    let module = load_module(input)?;
    println!(
        "{}: module {} is valid ({} enum(s), {} function(s))",
        input.display(),
        module.name.as_str(),
        module.enums.len(),
        module.functions.len()
    );
    Ok(())
}
