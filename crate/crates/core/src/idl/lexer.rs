//! Tokenizer for `.eb` interface sources.

use std::fmt;

use super::diag::{Code, Diagnostic, Diagnostics, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    KwModule,
    KwEnum,
    KwCase,
    KwFunc,
    KwThrows,
    KwThrow,
    KwReturn,
    KwIf,
    KwElse,
    KwTrue,
    KwFalse,
    Ident(String),
    /// Magnitude only; sign and range are checked by the parser.
    Int(u64),
    Float(f64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Dot,
    Semi,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::KwModule => "`module`",
            TokenKind::KwEnum => "`enum`",
            TokenKind::KwCase => "`case`",
            TokenKind::KwFunc => "`func`",
            TokenKind::KwThrows => "`throws`",
            TokenKind::KwThrow => "`throw`",
            TokenKind::KwReturn => "`return`",
            TokenKind::KwIf => "`if`",
            TokenKind::KwElse => "`else`",
            TokenKind::KwTrue => "`true`",
            TokenKind::KwFalse => "`false`",
            TokenKind::Ident(name) => return write!(f, "identifier `{name}`"),
            TokenKind::Int(v) => return write!(f, "integer `{v}`"),
            TokenKind::Float(v) => return write!(f, "float `{v}`"),
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::Colon => "`:`",
            TokenKind::Comma => "`,`",
            TokenKind::Dot => "`.`",
            TokenKind::Semi => "`;`",
            TokenKind::Arrow => "`->`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::EqEq => "`==`",
            TokenKind::NotEq => "`!=`",
            TokenKind::Lt => "`<`",
            TokenKind::Le => "`<=`",
            TokenKind::Gt => "`>`",
            TokenKind::Ge => "`>=`",
            TokenKind::AndAnd => "`&&`",
            TokenKind::OrOr => "`||`",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn new(source: &'a str) -> Self {
        Cursor {
            chars: source.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.column)
    }
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "module" => TokenKind::KwModule,
        "enum" => TokenKind::KwEnum,
        "case" => TokenKind::KwCase,
        "func" => TokenKind::KwFunc,
        "throws" => TokenKind::KwThrows,
        "throw" => TokenKind::KwThrow,
        "return" => TokenKind::KwReturn,
        "if" => TokenKind::KwIf,
        "else" => TokenKind::KwElse,
        "true" => TokenKind::KwTrue,
        "false" => TokenKind::KwFalse,
        _ => return None,
    })
}

/// Splits `source` into tokens. Whitespace and `//` comments are dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostics> {
    let mut cur = Cursor::new(source);
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        let span = cur.span();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let kind = keyword(&word).unwrap_or(TokenKind::Ident(word));
            tokens.push(Token { kind, span });
            continue;
        }
        if c.is_ascii_digit() {
            match lex_number(&mut cur) {
                Ok(kind) => tokens.push(Token { kind, span }),
                Err(msg) => diags.push(Diagnostic::error(Code::Syntax, span, msg)),
            }
            continue;
        }

        cur.bump();
        let two = |cur: &mut Cursor<'_>, next: char| {
            if cur.peek() == Some(next) {
                cur.bump();
                true
            } else {
                false
            }
        };
        let kind = match c {
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            ':' => TokenKind::Colon,
            ',' => TokenKind::Comma,
            '.' => TokenKind::Dot,
            ';' => TokenKind::Semi,
            '+' => TokenKind::Plus,
            '*' => TokenKind::Star,
            '-' if two(&mut cur, '>') => TokenKind::Arrow,
            '-' => TokenKind::Minus,
            '/' if two(&mut cur, '/') => {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
                continue;
            }
            '/' => TokenKind::Slash,
            '=' if two(&mut cur, '=') => TokenKind::EqEq,
            '!' if two(&mut cur, '=') => TokenKind::NotEq,
            '<' if two(&mut cur, '=') => TokenKind::Le,
            '<' => TokenKind::Lt,
            '>' if two(&mut cur, '=') => TokenKind::Ge,
            '>' => TokenKind::Gt,
            '&' if two(&mut cur, '&') => TokenKind::AndAnd,
            '|' if two(&mut cur, '|') => TokenKind::OrOr,
            other => {
                diags.push(Diagnostic::error(
                    Code::UnknownChar,
                    span,
                    format!("unknown character `{}`", other.escape_debug()),
                ));
                continue;
            }
        };
        tokens.push(Token { kind, span });
    }

    if diags.is_empty() {
        Ok(tokens)
    } else {
        Err(Diagnostics(diags))
    }
}

fn lex_number(cur: &mut Cursor<'_>) -> Result<TokenKind, String> {
    let mut text = String::new();
    let mut is_float = false;
    while let Some(c) = cur.peek() {
        if c.is_ascii_digit() || c == '_' {
            text.push(c);
            cur.bump();
        } else if c == '.' && !is_float {
            // `1.foo` is not a thing in this language, but keep `1.` out of
            // float literals so a trailing dot reports as a syntax error.
            let mut ahead = cur.chars.clone();
            ahead.next();
            match ahead.peek() {
                Some(&(_, d)) if d.is_ascii_digit() => {
                    is_float = true;
                    text.push('.');
                    cur.bump();
                }
                _ => break,
            }
        } else if (c == 'e' || c == 'E') && is_float {
            text.push(c);
            cur.bump();
            if let Some(sign @ ('+' | '-')) = cur.peek() {
                text.push(sign);
                cur.bump();
            }
        } else {
            break;
        }
    }
    let cleaned: String = text.chars().filter(|&c| c != '_').collect();
    if is_float {
        cleaned
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(TokenKind::Float)
            .ok_or_else(|| format!("invalid float literal `{text}`"))
    } else {
        cleaned
            .parse::<u64>()
            .map(TokenKind::Int)
            .map_err(|_| format!("integer literal `{text}` does not fit in 64 bits"))
    }
}
