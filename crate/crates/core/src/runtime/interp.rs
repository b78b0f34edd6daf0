//! Tree-walking evaluator for function bodies.

use crate::idl::{BinOp, Expr, ExprKind, FunctionDecl, ScalarType, Stmt};

use super::trap::Trap;
use super::value::Value;

/// The error a body threw, identified by enum name and case position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThrownError {
    pub enum_name: String,
    pub case_name: String,
}

/// Result of evaluating a function: a value or a thrown error, never both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Returned(Value),
    Threw(ThrownError),
}

enum Flow {
    Return(Value),
    Throw(ThrownError),
}

struct Frame<'f> {
    func: &'f FunctionDecl,
    args: &'f [Value],
}

/// Checks `args` against the declared parameter list.
pub fn check_args(func: &FunctionDecl, args: &[Value]) -> Result<(), Trap> {
    if args.len() != func.params.len() {
        return Err(Trap::Arity {
            function: func.name.name.clone(),
            expected: func.params.len(),
            got: args.len(),
        });
    }
    for (index, (p, a)) in func.params.iter().zip(args).enumerate() {
        if p.ty != a.ty() {
            return Err(Trap::ArgumentType {
                function: func.name.name.clone(),
                index,
                expected: p.ty,
                found: a.ty(),
            });
        }
    }
    Ok(())
}

/// Evaluates `func` (from a validated module) on `args`. Pure and
/// deterministic; the first `throw` reached wins.
pub fn eval_function(func: &FunctionDecl, args: &[Value]) -> Result<Outcome, Trap> {
    check_args(func, args)?;
    let frame = Frame { func, args };
    match frame.block(&func.body)? {
        Some(Flow::Return(v)) => Ok(Outcome::Returned(v)),
        Some(Flow::Throw(e)) => Ok(Outcome::Threw(e)),
        None if func.returns == ScalarType::Unit => Ok(Outcome::Returned(Value::Unit)),
        None => Err(Trap::MissingReturn {
            function: func.name.name.clone(),
        }),
    }
}

impl Frame<'_> {
    fn block(&self, stmts: &[Stmt]) -> Result<Option<Flow>, Trap> {
        for stmt in stmts {
            if let Some(flow) = self.stmt(stmt)? {
                return Ok(Some(flow));
            }
        }
        Ok(None)
    }

    fn stmt(&self, stmt: &Stmt) -> Result<Option<Flow>, Trap> {
        match stmt {
            Stmt::If {
                cond,
                then_body,
                else_body,
                ..
            } => {
                if self.truthy(cond)? {
                    self.block(then_body)
                } else {
                    self.block(else_body)
                }
            }
            Stmt::Return { value: None, .. } => Ok(Some(Flow::Return(Value::Unit))),
            Stmt::Return { value: Some(e), .. } => Ok(Some(Flow::Return(self.expr(e)?))),
            Stmt::Throw {
                enum_name, case, ..
            } => Ok(Some(Flow::Throw(ThrownError {
                enum_name: enum_name.name.clone(),
                case_name: case.name.clone(),
            }))),
        }
    }

    fn truthy(&self, e: &Expr) -> Result<bool, Trap> {
        match self.expr(e)? {
            Value::Bool(b) => Ok(b),
            other => unreachable!("validated condition evaluated to {other:?}"),
        }
    }

    fn param(&self, name: &str) -> Value {
        let idx = self
            .func
            .params
            .iter()
            .position(|p| p.name.name == name)
            .unwrap_or_else(|| unreachable!("validated module references unknown `{name}`"));
        self.args[idx]
    }

    fn expr(&self, e: &Expr) -> Result<Value, Trap> {
        Ok(match &e.kind {
            ExprKind::Int { value } => Value::Int(*value),
            ExprKind::Float { value } => Value::Float(*value),
            ExprKind::Bool { value } => Value::Bool(*value),
            ExprKind::Param { name } => self.param(name),
            ExprKind::FloatCast { operand } => match self.expr(operand)? {
                Value::Int(i) => Value::Float(i as f64),
                Value::Float(f) => Value::Float(f),
                other => unreachable!("Float() of {other:?}"),
            },
            ExprKind::Binary {
                op: BinOp::And,
                lhs,
                rhs,
            } => Value::Bool(self.truthy(lhs)? && self.truthy(rhs)?),
            ExprKind::Binary {
                op: BinOp::Or,
                lhs,
                rhs,
            } => Value::Bool(self.truthy(lhs)? || self.truthy(rhs)?),
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.expr(lhs)?;
                let r = self.expr(rhs)?;
                self.binary(*op, l, r)?
            }
        })
    }

    fn binary(&self, op: BinOp, l: Value, r: Value) -> Result<Value, Trap> {
        use Value::*;
        let overflow = || Trap::IntegerOverflow {
            function: self.func.name.name.clone(),
        };
        Ok(match (l, r) {
            (Int(a), Int(b)) => match op {
                BinOp::Add => Int(a.checked_add(b).ok_or_else(overflow)?),
                BinOp::Sub => Int(a.checked_sub(b).ok_or_else(overflow)?),
                BinOp::Mul => Int(a.checked_mul(b).ok_or_else(overflow)?),
                BinOp::Div if b == 0 => {
                    return Err(Trap::DivisionByZero {
                        function: self.func.name.name.clone(),
                    })
                }
                BinOp::Div => Int(a.checked_div(b).ok_or_else(overflow)?),
                cmp => Bool(compare(cmp, a.cmp(&b))),
            },
            (Float(a), Float(b)) => match op {
                BinOp::Add => Float(a + b),
                BinOp::Sub => Float(a - b),
                BinOp::Mul => Float(a * b),
                BinOp::Div => Float(a / b),
                BinOp::Eq => Bool(a == b),
                BinOp::Ne => Bool(a != b),
                BinOp::Lt => Bool(a < b),
                BinOp::Le => Bool(a <= b),
                BinOp::Gt => Bool(a > b),
                BinOp::Ge => Bool(a >= b),
                BinOp::And | BinOp::Or => unreachable!(),
            },
            (Bool(a), Bool(b)) => match op {
                BinOp::Eq => Bool(a == b),
                BinOp::Ne => Bool(a != b),
                other => unreachable!("{other:?} on Bool"),
            },
            (l, r) => unreachable!("ill-typed operands {l:?} {op:?} {r:?}"),
        })
    }
}

fn compare(op: BinOp, ord: std::cmp::Ordering) -> bool {
    use std::cmp::Ordering::*;
    match op {
        BinOp::Eq => ord == Equal,
        BinOp::Ne => ord != Equal,
        BinOp::Lt => ord == Less,
        BinOp::Le => ord != Greater,
        BinOp::Gt => ord == Greater,
        BinOp::Ge => ord != Less,
        _ => unreachable!(),
    }
}
