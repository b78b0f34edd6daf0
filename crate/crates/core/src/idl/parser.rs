//! Recursive-descent parser producing an unvalidated [`InterfaceModule`].
//!
//! Name resolution and typing are deferred to validation, so the grammar here
//! only cares about shape. Statements may optionally be separated by `;`.

use super::ast::*;
use super::diag::{Code, Diagnostic, Diagnostics, Span};
use super::lexer::{Token, TokenKind};

pub fn parse(tokens: &[Token]) -> Result<InterfaceModule, Diagnostics> {
    let mut p = Parser { tokens, pos: 0 };
    p.module().map_err(Diagnostics::single)
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    /// Span of the current token, or just past the last one at end of input.
    fn span(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => self
                .tokens
                .last()
                .map(|t| Span::new(t.span.line, t.span.column + 1))
                .unwrap_or(Span::new(1, 1)),
        }
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> Diagnostic {
        let found = match self.peek() {
            Some(k) => k.to_string(),
            None => "end of input".to_string(),
        };
        Diagnostic::error(
            Code::Syntax,
            self.span(),
            format!("expected {expected}, found {found}"),
        )
    }

    fn expect(&mut self, kind: &TokenKind) -> PResult<Span> {
        let span = self.span();
        if self.eat(kind) {
            Ok(span)
        } else {
            Err(self.error(&kind.to_string()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let span = self.span();
                self.pos += 1;
                Ok(Ident::new(name.clone(), span))
            }
            _ => Err(self.error(what)),
        }
    }

    fn skip_semis(&mut self) {
        while self.eat(&TokenKind::Semi) {}
    }

    fn module(&mut self) -> PResult<InterfaceModule> {
        self.expect(&TokenKind::KwModule)?;
        let name = self.ident("module name")?;
        let mut module = InterfaceModule {
            name,
            enums: Vec::new(),
            functions: Vec::new(),
        };
        loop {
            self.skip_semis();
            match self.peek() {
                None => break,
                Some(TokenKind::KwEnum) => module.enums.push(self.enum_decl()?),
                Some(TokenKind::KwFunc) => module.functions.push(self.func_decl()?),
                Some(_) => return Err(self.error("`enum`, `func`, or end of input")),
            }
        }
        Ok(module)
    }

    fn enum_decl(&mut self) -> PResult<ErrorEnumDecl> {
        self.expect(&TokenKind::KwEnum)?;
        let name = self.ident("enum name")?;
        self.expect(&TokenKind::Colon)?;
        match self.peek() {
            Some(TokenKind::Ident(n)) if n == "Error" => self.pos += 1,
            _ => return Err(self.error("`Error`")),
        }
        self.expect(&TokenKind::LBrace)?;
        let mut cases = Vec::new();
        loop {
            self.skip_semis();
            if !self.eat(&TokenKind::KwCase) {
                break;
            }
            cases.push(self.ident("case name")?);
        }
        if cases.is_empty() {
            return Err(self.error("`case`"));
        }
        self.expect(&TokenKind::RBrace)?;
        Ok(ErrorEnumDecl { name, cases })
    }

    fn func_decl(&mut self) -> PResult<FunctionDecl> {
        self.expect(&TokenKind::KwFunc)?;
        let name = self.ident("function name")?;
        self.expect(&TokenKind::LParen)?;
        let mut params = Vec::new();
        if self.peek() != Some(&TokenKind::RParen) {
            loop {
                params.push(self.param()?);
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(&TokenKind::RParen)?;
        let throws = self.eat(&TokenKind::KwThrows);
        let returns = if self.eat(&TokenKind::Arrow) {
            self.type_name(true)?
        } else {
            ScalarType::Unit
        };
        let body = self.block()?;
        Ok(FunctionDecl {
            name,
            params,
            returns,
            throws,
            body,
        })
    }

    /// `[_] name : Type`. The leading `_` is the Swift "no argument label"
    /// marker and carries no meaning here.
    fn param(&mut self) -> PResult<Param> {
        if matches!(self.peek(), Some(TokenKind::Ident(n)) if n == "_")
            && matches!(self.peek_at(1), Some(TokenKind::Ident(_)))
        {
            self.pos += 1;
        }
        let name = self.ident("parameter name")?;
        self.expect(&TokenKind::Colon)?;
        let ty = self.type_name(false)?;
        Ok(Param { name, ty })
    }

    fn type_name(&mut self, allow_unit: bool) -> PResult<ScalarType> {
        let expected = if allow_unit {
            "type (`Int`, `Float`, `Bool`, or `Void`)"
        } else {
            "type (`Int`, `Float`, or `Bool`)"
        };
        let ty = match self.peek() {
            Some(TokenKind::Ident(n)) => match n.as_str() {
                "Int" => ScalarType::Int,
                "Float" => ScalarType::Float,
                "Bool" => ScalarType::Bool,
                "Void" if allow_unit => ScalarType::Unit,
                _ => return Err(self.error(expected)),
            },
            _ => return Err(self.error(expected)),
        };
        self.pos += 1;
        Ok(ty)
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(&TokenKind::LBrace)?;
        let mut stmts = Vec::new();
        loop {
            self.skip_semis();
            if self.eat(&TokenKind::RBrace) {
                return Ok(stmts);
            }
            stmts.push(self.stmt()?);
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let span = self.span();
        match self.peek() {
            Some(TokenKind::KwIf) => self.if_stmt(),
            Some(TokenKind::KwReturn) => {
                self.pos += 1;
                let value = match self.peek() {
                    None
                    | Some(TokenKind::RBrace)
                    | Some(TokenKind::Semi)
                    | Some(TokenKind::KwIf)
                    | Some(TokenKind::KwReturn)
                    | Some(TokenKind::KwThrow) => None,
                    Some(_) => Some(self.expr()?),
                };
                Ok(Stmt::Return { value, span })
            }
            Some(TokenKind::KwThrow) => {
                self.pos += 1;
                let enum_name = self.ident("error enum name")?;
                self.expect(&TokenKind::Dot)?;
                let case = self.ident("error case name")?;
                Ok(Stmt::Throw {
                    enum_name,
                    case,
                    span,
                })
            }
            _ => Err(self.error("`if`, `return`, or `throw`")),
        }
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        let span = self.expect(&TokenKind::KwIf)?;
        let cond = self.expr()?;
        let then_body = self.block()?;
        let else_body = if self.eat(&TokenKind::KwElse) {
            if self.peek() == Some(&TokenKind::KwIf) {
                vec![self.if_stmt()?]
            } else {
                self.block()?
            }
        } else {
            Vec::new()
        };
        Ok(Stmt::If {
            cond,
            then_body,
            else_body,
            span,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.primary()?;
        while let Some(op) = self.peek().and_then(binop) {
            if op.precedence() < min_prec {
                break;
            }
            let op_span = self.span();
            self.pos += 1;
            let rhs = self.binary(op.precedence() + 1)?;
            let span = if lhs.span.is_known() {
                lhs.span
            } else {
                op_span
            };
            lhs = Expr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        let Some(tok) = self.peek() else {
            return Err(self.error("expression"));
        };
        let kind = match tok {
            TokenKind::Int(v) => {
                let v = *v;
                self.pos += 1;
                ExprKind::Int {
                    value: i64::try_from(v).map_err(|_| {
                        Diagnostic::error(
                            Code::Syntax,
                            span,
                            format!("integer literal `{v}` does not fit in Int"),
                        )
                    })?,
                }
            }
            TokenKind::Float(v) => {
                let value = *v;
                self.pos += 1;
                ExprKind::Float { value }
            }
            TokenKind::KwTrue | TokenKind::KwFalse => {
                let value = *tok == TokenKind::KwTrue;
                self.pos += 1;
                ExprKind::Bool { value }
            }
            TokenKind::Minus => {
                self.pos += 1;
                match self.advance().map(|t| &t.kind) {
                    Some(TokenKind::Int(v)) => {
                        let v = *v;
                        let value = 0i64.checked_sub_unsigned(v).ok_or_else(|| {
                            Diagnostic::error(
                                Code::Syntax,
                                span,
                                format!("integer literal `-{v}` does not fit in Int"),
                            )
                        })?;
                        ExprKind::Int { value }
                    }
                    Some(TokenKind::Float(v)) => ExprKind::Float { value: -v },
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("numeric literal after `-`"));
                    }
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                return Ok(inner);
            }
            TokenKind::Ident(name) if name == "Float" => {
                self.pos += 1;
                self.expect(&TokenKind::LParen)?;
                let operand = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                ExprKind::FloatCast {
                    operand: Box::new(operand),
                }
            }
            TokenKind::Ident(name) => {
                let name = name.clone();
                self.pos += 1;
                ExprKind::Param { name }
            }
            _ => return Err(self.error("expression")),
        };
        Ok(Expr::new(kind, span))
    }
}

fn binop(kind: &TokenKind) -> Option<BinOp> {
    Some(match kind {
        TokenKind::Plus => BinOp::Add,
        TokenKind::Minus => BinOp::Sub,
        TokenKind::Star => BinOp::Mul,
        TokenKind::Slash => BinOp::Div,
        TokenKind::EqEq => BinOp::Eq,
        TokenKind::NotEq => BinOp::Ne,
        TokenKind::Lt => BinOp::Lt,
        TokenKind::Le => BinOp::Le,
        TokenKind::Gt => BinOp::Gt,
        TokenKind::Ge => BinOp::Ge,
        TokenKind::AndAnd => BinOp::And,
        TokenKind::OrOr => BinOp::Or,
        _ => return None,
    })
}
