use std::fmt;

/// A 1-based source position.
///
/// Positions never participate in structural equality: two nodes parsed from
/// differently formatted sources (or one deserialized without positions)
/// compare equal when their contents agree.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub column: u32,
}

impl Span {
    pub const fn new(line: u32, column: u32) -> Self {
        Span { line, column }
    }

    /// True when the span came from real source text.
    pub fn is_known(&self) -> bool {
        self.line > 0
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// Stable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    /// Unknown character.
    UnknownChar,
    /// Syntax error.
    Syntax,
    /// Unknown enum or case in `throw`.
    UnknownErrorCase,
    /// `throw` inside a non-throwing function.
    ThrowInNonThrowing,
    /// Type mismatch.
    TypeMismatch,
    /// Some path falls off the end of a value-returning function.
    MissingReturn,
    /// Duplicate declaration name.
    Duplicate,
    /// Reference to an undeclared parameter.
    UnknownIdentifier,
    /// Statement that can never execute.
    Unreachable,
}

impl Code {
    pub fn as_str(&self) -> &'static str {
        match self {
            Code::UnknownChar => "E0001",
            Code::Syntax => "E0002",
            Code::UnknownErrorCase => "E0003",
            Code::ThrowInNonThrowing => "E0004",
            Code::TypeMismatch => "E0005",
            Code::MissingReturn => "E0006",
            Code::Duplicate => "E0007",
            Code::UnknownIdentifier => "E0008",
            Code::Unreachable => "W0001",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub code: Code,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            code,
            message: message.into(),
        }
    }

    pub fn warning(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            span,
            code,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Renders as `file:line:col: code: message`.
    pub fn render(&self, file: &str) -> String {
        format!(
            "{}:{}:{}: {}: {}",
            file, self.span.line, self.span.column, self.code, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} {}: {}",
            self.span.line, self.span.column, self.severity, self.code, self.message
        )
    }
}

/// A non-empty batch of diagnostics containing at least one error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{} diagnostic(s), first: {}", .0.len(), .0[0])]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn single(d: Diagnostic) -> Self {
        Diagnostics(vec![d])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter().filter(|d| d.is_error())
    }

    pub fn has_code(&self, code: Code) -> bool {
        self.0.iter().any(|d| d.code == code)
    }
}
