//! Syntax tree for interface modules.
//!
//! The serde layout of these types *is* the canonical module format
//! (`.ebm`): field names are part of the wire contract. Source positions
//! and inferred types are never serialized.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::diag::Span;

/// A name with the position it was written at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.name
    }
}

impl From<&str> for Ident {
    fn from(name: &str) -> Self {
        Ident::new(name, Span::default())
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for Ident {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl<'de> Deserialize<'de> for Ident {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d).map(|name| Ident::new(name, Span::default()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarType {
    Int,
    Float,
    Bool,
    Unit,
}

impl fmt::Display for ScalarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarType::Int => "Int",
            ScalarType::Float => "Float",
            ScalarType::Bool => "Bool",
            ScalarType::Unit => "Unit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfaceModule {
    pub name: Ident,
    pub enums: Vec<ErrorEnumDecl>,
    pub functions: Vec<FunctionDecl>,
}

impl InterfaceModule {
    pub fn new(name: impl Into<String>) -> Self {
        InterfaceModule {
            name: Ident::from(name.into().as_str()),
            enums: Vec::new(),
            functions: Vec::new(),
        }
    }

    pub fn find_enum(&self, name: &str) -> Option<(usize, &ErrorEnumDecl)> {
        self.enums
            .iter()
            .enumerate()
            .find(|(_, e)| e.name.name == name)
    }

    pub fn find_function(&self, name: &str) -> Option<(usize, &FunctionDecl)> {
        self.functions
            .iter()
            .enumerate()
            .find(|(_, f)| f.name.name == name)
    }

    /// Prints the module back as `.eb` source.
    pub fn to_source(&self) -> String {
        let mut out = format!("module {}\n", self.name);
        for e in &self.enums {
            let _ = writeln!(out, "\nenum {} : Error {{", e.name);
            for c in &e.cases {
                let _ = writeln!(out, "    case {c}");
            }
            out.push_str("}\n");
        }
        for f in &self.functions {
            let params: Vec<String> = f
                .params
                .iter()
                .map(|p| format!("{}: {}", p.name, p.ty))
                .collect();
            let _ = write!(out, "\nfunc {}({})", f.name, params.join(", "));
            if f.throws {
                out.push_str(" throws");
            }
            if f.returns != ScalarType::Unit {
                let _ = write!(out, " -> {}", f.returns);
            }
            out.push_str(" {\n");
            write_block(&mut out, &f.body, 1);
            out.push_str("}\n");
        }
        out
    }
}

fn write_block(out: &mut String, body: &[Stmt], depth: usize) {
    let pad = "    ".repeat(depth);
    for stmt in body {
        match stmt {
            Stmt::If {
                cond,
                then_body,
                else_body,
                ..
            } => {
                let _ = writeln!(out, "{pad}if {cond} {{");
                write_block(out, then_body, depth + 1);
                if else_body.is_empty() {
                    let _ = writeln!(out, "{pad}}}");
                } else {
                    let _ = writeln!(out, "{pad}}} else {{");
                    write_block(out, else_body, depth + 1);
                    let _ = writeln!(out, "{pad}}}");
                }
            }
            Stmt::Return { value: Some(e), .. } => {
                let _ = writeln!(out, "{pad}return {e}");
            }
            Stmt::Return { value: None, .. } => {
                let _ = writeln!(out, "{pad}return");
            }
            Stmt::Throw {
                enum_name, case, ..
            } => {
                let _ = writeln!(out, "{pad}throw {enum_name}.{case}");
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorEnumDecl {
    pub name: Ident,
    pub cases: Vec<Ident>,
}

impl ErrorEnumDecl {
    pub fn case_index(&self, case: &str) -> Option<usize> {
        self.cases.iter().position(|c| c.name == case)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Param {
    pub name: Ident,
    #[serde(rename = "type")]
    pub ty: ScalarType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDecl {
    pub name: Ident,
    pub params: Vec<Param>,
    pub returns: ScalarType,
    pub throws: bool,
    pub body: Vec<Stmt>,
}

// Float literals never hold NaN (the lexer only produces finite values), so
// structural equality over the tree is reflexive.
impl Eq for FunctionDecl {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Stmt {
    If {
        cond: Expr,
        #[serde(rename = "then")]
        then_body: Vec<Stmt>,
        #[serde(rename = "else")]
        else_body: Vec<Stmt>,
        #[serde(skip)]
        span: Span,
    },
    Return {
        value: Option<Expr>,
        #[serde(skip)]
        span: Span,
    },
    Throw {
        #[serde(rename = "enum")]
        enum_name: Ident,
        case: Ident,
        #[serde(skip)]
        span: Span,
    },
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::If { span, .. } | Stmt::Return { span, .. } | Stmt::Throw { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "&&")]
    And,
    #[serde(rename = "||")]
    Or,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(&self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div => 5,
        }
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }

    pub fn is_comparison(&self) -> bool {
        self.precedence() == 3
    }

    pub fn is_logical(&self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExprKind {
    Int {
        value: i64,
    },
    Float {
        value: f64,
    },
    Bool {
        value: bool,
    },
    Param {
        name: String,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    FloatCast {
        operand: Box<Expr>,
    },
}

/// An expression node. `ty` is filled in by validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "ExprKind", into = "ExprKind")]
pub struct Expr {
    pub kind: ExprKind,
    pub ty: Option<ScalarType>,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr {
            kind,
            ty: None,
            span,
        }
    }

    pub fn int(value: i64) -> Self {
        Expr::new(ExprKind::Int { value }, Span::default())
    }

    pub fn float(value: f64) -> Self {
        Expr::new(ExprKind::Float { value }, Span::default())
    }

    pub fn boolean(value: bool) -> Self {
        Expr::new(ExprKind::Bool { value }, Span::default())
    }

    pub fn param(name: &str) -> Self {
        Expr::new(
            ExprKind::Param {
                name: name.to_string(),
            },
            Span::default(),
        )
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        let span = lhs.span;
        Expr::new(
            ExprKind::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            },
            span,
        )
    }

    pub fn float_cast(operand: Expr) -> Self {
        Expr::new(
            ExprKind::FloatCast {
                operand: Box::new(operand),
            },
            Span::default(),
        )
    }
}

impl From<ExprKind> for Expr {
    fn from(kind: ExprKind) -> Self {
        Expr::new(kind, Span::default())
    }
}

impl From<Expr> for ExprKind {
    fn from(e: Expr) -> Self {
        e.kind
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized for nested binaries so printing never has to
    /// reason about associativity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int { value } if *value < 0 => write!(f, "({value})"),
            ExprKind::Int { value } => write!(f, "{value}"),
            ExprKind::Float { value } => {
                // `{:?}` always keeps a fractional part or exponent.
                if *value < 0.0 {
                    write!(f, "({value:?})")
                } else {
                    write!(f, "{value:?}")
                }
            }
            ExprKind::Bool { value } => write!(f, "{value}"),
            ExprKind::Param { name } => f.write_str(name),
            ExprKind::Binary { op, lhs, rhs } => {
                write!(f, "({lhs} {} {rhs})", op.symbol())
            }
            ExprKind::FloatCast { operand } => write!(f, "Float({operand})"),
        }
    }
}

/// A module that passed validation. Only [`super::validate`] and
/// [`super::deserialize_module`] construct one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedModule {
    module: InterfaceModule,
}

impl ValidatedModule {
    pub(crate) fn new_unchecked(module: InterfaceModule) -> Self {
        ValidatedModule { module }
    }

    pub fn module(&self) -> &InterfaceModule {
        &self.module
    }

    pub fn into_inner(self) -> InterfaceModule {
        self.module
    }
}

impl std::ops::Deref for ValidatedModule {
    type Target = InterfaceModule;

    fn deref(&self) -> &InterfaceModule {
        &self.module
    }
}
