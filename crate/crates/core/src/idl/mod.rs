//! The interface-definition language: `.eb` sources describing error enums
//! and (possibly throwing) functions with small bodies.

pub mod ast;
pub mod diag;
pub mod lexer;
pub mod parser;
pub mod serial;
pub mod validate;

pub use ast::{
    BinOp, ErrorEnumDecl, Expr, ExprKind, FunctionDecl, Ident, InterfaceModule, Param, ScalarType,
    Stmt, ValidatedModule,
};
pub use diag::{Code, Diagnostic, Diagnostics, Severity, Span};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;
pub use serial::{deserialize_module, serialize_module, DeserializeError};
pub use validate::{validate, validate_with_warnings};

/// Tokenizes and parses `source` without validating it.
pub fn parse_source(source: &str) -> Result<InterfaceModule, Diagnostics> {
    parse(&tokenize(source)?)
}

/// The full front end: tokenize, parse, validate.
pub fn compile_source(source: &str) -> Result<ValidatedModule, Diagnostics> {
    validate(parse_source(source)?)
}
