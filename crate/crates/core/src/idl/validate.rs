//! Name resolution, typing, and control-flow checks.

use std::collections::HashMap;

use super::ast::*;
use super::diag::{Code, Diagnostic, Diagnostics, Span};

/// Validates `module`, discarding warnings.
pub fn validate(module: InterfaceModule) -> Result<ValidatedModule, Diagnostics> {
    validate_with_warnings(module).map(|(m, _)| m)
}

/// Validates `module`. On success the returned module has every expression
/// annotated with its type, and integer literals used where a `Float` is
/// expected rewritten to float literals.
pub fn validate_with_warnings(
    mut module: InterfaceModule,
) -> Result<(ValidatedModule, Vec<Diagnostic>), Diagnostics> {
    let mut diags = Vec::new();

    check_ident(&module.name, "module", &mut diags);

    let mut seen: HashMap<&str, &'static str> = HashMap::new();
    for e in &module.enums {
        check_ident(&e.name, "enum", &mut diags);
        if let Some(prev) = seen.insert(&e.name.name, "enum") {
            diags.push(duplicate(&e.name, prev));
        }
        if e.cases.is_empty() {
            diags.push(Diagnostic::error(
                Code::Syntax,
                e.name.span,
                format!("enum `{}` declares no cases", e.name),
            ));
        }
        let mut cases = HashMap::new();
        for c in &e.cases {
            check_ident(c, "case", &mut diags);
            if cases.insert(c.name.as_str(), ()).is_some() {
                diags.push(duplicate(c, "case"));
            }
        }
    }
    for f in &module.functions {
        check_ident(&f.name, "function", &mut diags);
        if let Some(prev) = seen.insert(&f.name.name, "function") {
            diags.push(duplicate(&f.name, prev));
        }
        let mut params = HashMap::new();
        for p in &f.params {
            check_ident(&p.name, "parameter", &mut diags);
            if params.insert(p.name.name.as_str(), ()).is_some() {
                diags.push(duplicate(&p.name, "parameter"));
            }
            if p.ty == ScalarType::Unit {
                diags.push(Diagnostic::error(
                    Code::TypeMismatch,
                    p.name.span,
                    format!("parameter `{}` cannot have type Unit", p.name),
                ));
            }
        }
    }

    let enums: HashMap<String, Vec<String>> = module
        .enums
        .iter()
        .map(|e| {
            (
                e.name.name.clone(),
                e.cases.iter().map(|c| c.name.clone()).collect(),
            )
        })
        .collect();

    for f in &mut module.functions {
        let mut checker = FnChecker {
            enums: &enums,
            params: f
                .params
                .iter()
                .map(|p| (p.name.name.clone(), p.ty))
                .collect(),
            func_name: f.name.name.clone(),
            returns: f.returns,
            throws: f.throws,
            diags: &mut diags,
        };
        let terminates = checker.block(&mut f.body);
        if !terminates && f.returns != ScalarType::Unit {
            diags.push(Diagnostic::error(
                Code::MissingReturn,
                f.name.span,
                format!(
                    "function `{}` does not return a {} on every path",
                    f.name, f.returns
                ),
            ));
        }
    }

    if diags.iter().any(Diagnostic::is_error) {
        Err(Diagnostics(diags))
    } else {
        Ok((ValidatedModule::new_unchecked(module), diags))
    }
}

fn duplicate(name: &Ident, prev_kind: &str) -> Diagnostic {
    Diagnostic::error(
        Code::Duplicate,
        name.span,
        format!("duplicate name `{name}` (already declared as a {prev_kind})"),
    )
}

const KEYWORDS: &[&str] = &[
    "module", "enum", "case", "func", "throws", "throw", "return", "if", "else", "true", "false",
];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

// Sources produced by the lexer always satisfy this; deserialized modules
// might not.
fn check_ident(name: &Ident, what: &str, diags: &mut Vec<Diagnostic>) {
    if !is_identifier(&name.name) {
        diags.push(Diagnostic::error(
            Code::Syntax,
            name.span,
            format!("invalid {what} name `{}`", name.name.escape_debug()),
        ));
    }
}

struct FnChecker<'a> {
    enums: &'a HashMap<String, Vec<String>>,
    params: HashMap<String, ScalarType>,
    func_name: String,
    returns: ScalarType,
    throws: bool,
    diags: &'a mut Vec<Diagnostic>,
}

impl FnChecker<'_> {
    /// Checks a statement list; returns true when every path through it ends
    /// in `return` or `throw`.
    fn block(&mut self, stmts: &mut [Stmt]) -> bool {
        let mut terminated = false;
        let mut warned = false;
        for stmt in stmts.iter_mut() {
            if terminated && !warned {
                self.diags.push(Diagnostic::warning(
                    Code::Unreachable,
                    stmt.span(),
                    "statement is never executed",
                ));
                warned = true;
            }
            terminated |= self.stmt(stmt);
        }
        terminated
    }

    fn stmt(&mut self, stmt: &mut Stmt) -> bool {
        match stmt {
            Stmt::If {
                cond,
                then_body,
                else_body,
                ..
            } => {
                if let Some(ty) = self.expr(cond, None) {
                    if ty != ScalarType::Bool {
                        self.mismatch(cond.span, format!("condition must be Bool, found {ty}"));
                    }
                }
                let t = self.block(then_body);
                let e = self.block(else_body);
                t && e
            }
            Stmt::Return { value, span } => {
                match value {
                    None if self.returns != ScalarType::Unit => {
                        self.mismatch(
                            *span,
                            format!("`{}` must return a {}", self.func_name, self.returns),
                        );
                    }
                    None => {}
                    Some(e) if self.returns == ScalarType::Unit => {
                        self.mismatch(
                            e.span,
                            format!(
                                "`{}` returns nothing but a value is returned",
                                self.func_name
                            ),
                        );
                    }
                    Some(e) => {
                        if let Some(ty) = self.expr(e, Some(self.returns)) {
                            if ty != self.returns {
                                self.mismatch(
                                    e.span,
                                    format!("expected {} in return, found {ty}", self.returns),
                                );
                            }
                        }
                    }
                }
                true
            }
            Stmt::Throw {
                enum_name,
                case,
                span,
            } => {
                if !self.throws {
                    self.diags.push(Diagnostic::error(
                        Code::ThrowInNonThrowing,
                        *span,
                        format!(
                            "`throw` in function `{}` which is not marked `throws`",
                            self.func_name
                        ),
                    ));
                }
                match self.enums.get(&enum_name.name) {
                    None => self.diags.push(Diagnostic::error(
                        Code::UnknownErrorCase,
                        enum_name.span,
                        format!("unknown error enum `{enum_name}`"),
                    )),
                    Some(cases) if !cases.contains(&case.name) => {
                        self.diags.push(Diagnostic::error(
                            Code::UnknownErrorCase,
                            case.span,
                            format!("enum `{enum_name}` has no case `{case}`"),
                        ))
                    }
                    Some(_) => {}
                }
                true
            }
        }
    }

    fn mismatch(&mut self, span: Span, message: String) {
        self.diags
            .push(Diagnostic::error(Code::TypeMismatch, span, message));
    }

    /// Types `e`. `hint` is the type the context wants; only integer
    /// literals (and arithmetic built purely from them) adapt to it. `None`
    /// result means an error was already reported.
    fn expr(&mut self, e: &mut Expr, hint: Option<ScalarType>) -> Option<ScalarType> {
        let span = e.span;
        let ty = match &mut e.kind {
            ExprKind::Int { value } => {
                if hint == Some(ScalarType::Float) {
                    let value = *value as f64;
                    e.kind = ExprKind::Float { value };
                    Some(ScalarType::Float)
                } else {
                    Some(ScalarType::Int)
                }
            }
            ExprKind::Float { .. } => Some(ScalarType::Float),
            ExprKind::Bool { .. } => Some(ScalarType::Bool),
            ExprKind::Param { name } => match self.params.get(name.as_str()) {
                Some(ty) => Some(*ty),
                None => {
                    self.diags.push(Diagnostic::error(
                        Code::UnknownIdentifier,
                        span,
                        format!("unknown identifier `{name}`"),
                    ));
                    None
                }
            },
            ExprKind::FloatCast { operand } => match self.expr(operand, None) {
                Some(ScalarType::Int | ScalarType::Float) | None => Some(ScalarType::Float),
                Some(other) => {
                    self.mismatch(operand.span, format!("cannot convert {other} to Float"));
                    None
                }
            },
            ExprKind::Binary { op, lhs, rhs } => {
                let op = *op;
                let operand_hint = if op.is_arithmetic() { hint } else { None };
                let mut lt = self.expr(lhs, operand_hint);
                let mut rt = self.expr(rhs, operand_hint);
                if !op.is_logical() {
                    if lt == Some(ScalarType::Int)
                        && rt == Some(ScalarType::Float)
                        && is_literal_arith(lhs)
                    {
                        lt = self.expr(lhs, Some(ScalarType::Float));
                    } else if rt == Some(ScalarType::Int)
                        && lt == Some(ScalarType::Float)
                        && is_literal_arith(rhs)
                    {
                        rt = self.expr(rhs, Some(ScalarType::Float));
                    }
                }
                self.binary(op, span, lt, rt)
            }
        };
        e.ty = ty;
        ty
    }

    fn binary(
        &mut self,
        op: BinOp,
        span: Span,
        lt: Option<ScalarType>,
        rt: Option<ScalarType>,
    ) -> Option<ScalarType> {
        use ScalarType::*;
        let (lt, rt) = match (lt, rt) {
            (Some(l), Some(r)) => (l, r),
            // Recover with the result type the operator would have produced.
            (l, r) => {
                return if op.is_arithmetic() {
                    l.or(r)
                } else {
                    Some(Bool)
                };
            }
        };
        let sym = op.symbol();
        if op.is_logical() {
            if lt != Bool || rt != Bool {
                self.mismatch(
                    span,
                    format!("`{sym}` needs Bool operands, found {lt} and {rt}"),
                );
            }
            return Some(Bool);
        }
        if lt != rt {
            self.mismatch(span, format!("`{sym}` operands differ: {lt} and {rt}"));
            return if op.is_arithmetic() { None } else { Some(Bool) };
        }
        if op.is_arithmetic() {
            if !matches!(lt, Int | Float) {
                self.mismatch(span, format!("`{sym}` is not defined for {lt}"));
                return None;
            }
            return Some(lt);
        }
        let equality = matches!(op, BinOp::Eq | BinOp::Ne);
        if !(matches!(lt, Int | Float) || (equality && lt == Bool)) {
            self.mismatch(span, format!("`{sym}` is not defined for {lt}"));
        }
        Some(Bool)
    }
}

fn is_literal_arith(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Int { .. } => true,
        ExprKind::Binary { op, lhs, rhs } if op.is_arithmetic() => {
            is_literal_arith(lhs) && is_literal_arith(rhs)
        }
        _ => false,
    }
}
