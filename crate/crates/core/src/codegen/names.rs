//! C++ identifier rules for names that end up in generated headers.

const CXX_KEYWORDS: &[&str] = &[
    "alignas",
    "alignof",
    "and",
    "and_eq",
    "asm",
    "auto",
    "bitand",
    "bitor",
    "bool",
    "break",
    "case",
    "catch",
    "char",
    "char8_t",
    "char16_t",
    "char32_t",
    "class",
    "compl",
    "concept",
    "const",
    "consteval",
    "constexpr",
    "constinit",
    "const_cast",
    "continue",
    "co_await",
    "co_return",
    "co_yield",
    "decltype",
    "default",
    "delete",
    "do",
    "double",
    "dynamic_cast",
    "else",
    "enum",
    "explicit",
    "export",
    "extern",
    "false",
    "float",
    "for",
    "friend",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "mutable",
    "namespace",
    "new",
    "noexcept",
    "not",
    "not_eq",
    "nullptr",
    "operator",
    "or",
    "or_eq",
    "private",
    "protected",
    "public",
    "register",
    "reinterpret_cast",
    "requires",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "static_assert",
    "static_cast",
    "struct",
    "switch",
    "template",
    "this",
    "thread_local",
    "throw",
    "true",
    "try",
    "typedef",
    "typeid",
    "typename",
    "union",
    "unsigned",
    "using",
    "virtual",
    "void",
    "volatile",
    "wchar_t",
    "while",
    "xor",
    "xor_eq",
];

/// Names the generated code itself uses at the same scope.
const GENERATED: &[&str] = &["Swift", "_impl", "std"];

/// Members of every generated error-enum wrapper class.
pub(crate) const ENUM_MEMBERS: &[&str] = &[
    "Cases",
    "typeId",
    "fromCaseIndex",
    "getCase",
    "messageText",
    "getMessage",
    "value_",
];

/// Locals of every generated thunk.
pub(crate) const THUNK_LOCALS: &[&str] = &["opaqueError", "opaqueErrorGuard", "returnValue"];

/// Checks that `name` can be used verbatim as a C++ identifier in generated
/// code. Returns the reason when it cannot.
pub(crate) fn check_cxx_name(name: &str) -> Result<(), String> {
    let mut chars = name.chars();
    let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err("not an identifier".to_string());
    }
    if CXX_KEYWORDS.contains(&name) {
        return Err("is a C++ keyword".to_string());
    }
    if GENERATED.contains(&name) {
        return Err("collides with a name used by generated code".to_string());
    }
    if name.contains("__")
        || (name.starts_with('_') && name[1..].starts_with(|c: char| c.is_ascii_uppercase()))
    {
        return Err("is reserved for the C++ implementation".to_string());
    }
    if name.starts_with("eb_") {
        return Err("`eb_` prefix is reserved for the runtime ABI".to_string());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_plain_names() {
        for n in ["division", "DivByZero", "a", "_x", "x_1"] {
            assert_eq!(check_cxx_name(n), Ok(()), "{n}");
        }
    }

    #[test]
    fn rejects_keywords_and_reserved() {
        for n in [
            "delete",
            "class",
            "Swift",
            "_impl",
            "a__b",
            "_Upper",
            "eb_invoke",
            "",
            "1a",
        ] {
            assert!(check_cxx_name(n).is_err(), "{n}");
        }
    }
}
