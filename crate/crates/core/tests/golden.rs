//! Generated artifacts for the division module compared byte-for-byte with
//! the checked-in copies. Set `ERRBRIDGE_BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};

use errbridge::codegen::{generate, GenOptions};
use errbridge::idl::compile_source;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/Functions")
}

#[test]
fn division_artifacts_match_goldens() {
    let module = compile_source(include_str!("fixtures/functions.eb")).unwrap();
    let artifacts = generate(&module, &GenOptions::default()).unwrap();
    let bless = std::env::var_os("ERRBRIDGE_BLESS").is_some();
    for (name, bytes) in artifacts.files() {
        let path = golden_dir().join(name);
        if bless {
            std::fs::write(&path, bytes).unwrap();
            continue;
        }
        let expected = std::fs::read(&path)
            .unwrap_or_else(|e| panic!("cannot read golden {}: {e}", path.display()));
        assert!(
            expected == bytes,
            "{name} differs from its golden; rerun with ERRBRIDGE_BLESS=1 after review"
        );
    }
}

#[test]
fn goldens_contain_the_mode_gate_and_thunk_shape() {
    let support = std::fs::read_to_string(golden_dir().join("errbridge_support.h")).unwrap();
    assert!(
        support.contains("#ifdef __cpp_exceptions\ntemplate<class T>\nusing ThrowingResult = T;")
    );
    assert!(
        support.contains("#else\ntemplate<class T>\nusing ThrowingResult = Swift::Expected<T>;")
    );
    let header = std::fs::read_to_string(golden_dir().join("Functions.h")).unwrap();
    assert_eq!(header.matches("if (opaqueError != nullptr)").count(), 1);
    assert_eq!(
        header.matches("throw (Swift::Error(opaqueError));").count(),
        1
    );
    assert_eq!(
        header
            .matches("return EB_RETURN_THUNK(double, Swift::Error(opaqueError));")
            .count(),
        1
    );
}
