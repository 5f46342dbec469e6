use thiserror::Error;

use super::ast::{BinOp, Expr, SetExpr};
use crate::model::{Domain, State, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("local #{0} read before assignment")]
    Unbound(usize),
    #[error("expected {expected}, found {found:?}")]
    Type {
        expected: &'static str,
        found: Value,
    },
    #[error("argument {value:?} outside the declared type of {what}")]
    OutOfRange { what: String, value: Value },
    #[error("integer overflow")]
    Overflow,
}

pub type Locals = [Option<Value>];

/// Evaluates `e` against a state and a local scope.
pub fn eval(dom: &Domain, s: &State, locals: &Locals, e: &Expr) -> Result<Value, EvalError> {
    match e {
        Expr::Const(v) => Ok(*v),
        Expr::Var(i) => locals
            .get(*i)
            .copied()
            .flatten()
            .ok_or(EvalError::Unbound(*i)),
        Expr::Sv(f, args) => {
            let fam = dom.family(*f);
            let mut slot = fam.offset;
            for ((a, ty), stride) in args.iter().zip(&fam.params).zip(&fam.strides) {
                let v = eval(dom, s, locals, a)?;
                let p = dom
                    .ty(*ty)
                    .position(v)
                    .ok_or_else(|| EvalError::OutOfRange {
                        what: fam.name.clone(),
                        value: v,
                    })?;
                slot += p * stride;
            }
            Ok(s.get(slot))
        }
        Expr::Rigid(r, args) => {
            let rf = dom.rigid(*r);
            let mut idx = 0;
            for ((a, ty), stride) in args.iter().zip(&rf.params).zip(&rf.strides) {
                let v = eval(dom, s, locals, a)?;
                let p = dom
                    .ty(*ty)
                    .position(v)
                    .ok_or_else(|| EvalError::OutOfRange {
                        what: rf.name.clone(),
                        value: v,
                    })?;
                idx += p * stride;
            }
            Ok(rf.table[idx])
        }
        Expr::Not(a) => Ok(Value::Bool(!as_bool(eval(dom, s, locals, a)?)?)),
        Expr::Bin(op, a, b) => {
            match op {
                BinOp::And => {
                    return Ok(Value::Bool(
                        as_bool(eval(dom, s, locals, a)?)? && as_bool(eval(dom, s, locals, b)?)?,
                    ))
                }
                BinOp::Or => {
                    return Ok(Value::Bool(
                        as_bool(eval(dom, s, locals, a)?)? || as_bool(eval(dom, s, locals, b)?)?,
                    ))
                }
                _ => {}
            }
            let x = eval(dom, s, locals, a)?;
            let y = eval(dom, s, locals, b)?;
            match op {
                BinOp::Eq => Ok(Value::Bool(x == y)),
                BinOp::Ne => Ok(Value::Bool(x != y)),
                _ => {
                    let (x, y) = (as_int(x)?, as_int(y)?);
                    Ok(match op {
                        BinOp::Add => Value::Int(x.checked_add(y).ok_or(EvalError::Overflow)?),
                        BinOp::Sub => Value::Int(x.checked_sub(y).ok_or(EvalError::Overflow)?),
                        BinOp::Mul => Value::Int(x.checked_mul(y).ok_or(EvalError::Overflow)?),
                        BinOp::Min => Value::Int(x.min(y)),
                        BinOp::Max => Value::Int(x.max(y)),
                        BinOp::Lt => Value::Bool(x < y),
                        BinOp::Le => Value::Bool(x <= y),
                        BinOp::Gt => Value::Bool(x > y),
                        BinOp::Ge => Value::Bool(x >= y),
                        BinOp::Eq | BinOp::Ne | BinOp::And | BinOp::Or => unreachable!(),
                    })
                }
            }
        }
        Expr::If(c, a, b) => {
            if as_bool(eval(dom, s, locals, c)?)? {
                eval(dom, s, locals, a)
            } else {
                eval(dom, s, locals, b)
            }
        }
        Expr::ArgMin { var, over, score } => {
            arg_best(dom, s, locals, *var, over, score, |new, best| new < best)
        }
        Expr::ArgMax { var, over, score } => {
            arg_best(dom, s, locals, *var, over, score, |new, best| new > best)
        }
        Expr::Member(a, set) => {
            let v = eval(dom, s, locals, a)?;
            Ok(Value::Bool(eval_set(dom, s, locals, set)?.contains(&v)))
        }
        Expr::Count(set) => Ok(Value::Int(eval_set(dom, s, locals, set)?.len() as i64)),
    }
}

pub fn eval_bool(dom: &Domain, s: &State, locals: &Locals, e: &Expr) -> Result<bool, EvalError> {
    as_bool(eval(dom, s, locals, e)?)
}

/// Evaluates a set to its elements in canonical order, without duplicates.
pub fn eval_set(
    dom: &Domain,
    s: &State,
    locals: &Locals,
    set: &SetExpr,
) -> Result<Vec<Value>, EvalError> {
    match set {
        SetExpr::All(ty) => Ok(dom.ty(*ty).values().to_vec()),
        SetExpr::List(items) => {
            let mut out = Vec::with_capacity(items.len());
            for e in items {
                let v = eval(dom, s, locals, e)?;
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            Ok(out)
        }
        SetExpr::Filter { var, over, cond } => {
            let items = eval_set(dom, s, locals, over)?;
            let mut scope = scope_with(locals, *var);
            let mut out = Vec::with_capacity(items.len());
            for v in items {
                scope[*var] = Some(v);
                if eval_bool(dom, s, &scope, cond)? {
                    out.push(v);
                }
            }
            Ok(out)
        }
    }
}

fn arg_best(
    dom: &Domain,
    s: &State,
    locals: &Locals,
    var: usize,
    over: &SetExpr,
    score: &Expr,
    better: fn(i64, i64) -> bool,
) -> Result<Value, EvalError> {
    let items = eval_set(dom, s, locals, over)?;
    let mut scope = scope_with(locals, var);
    let mut best: Option<(Value, i64)> = None;
    for v in items {
        scope[var] = Some(v);
        let sc = as_int(eval(dom, s, &scope, score)?)?;
        if best.is_none_or(|(_, b)| better(sc, b)) {
            best = Some((v, sc));
        }
    }
    Ok(best.map_or(Value::None, |(v, _)| v))
}

fn scope_with(locals: &Locals, var: usize) -> Vec<Option<Value>> {
    let mut scope = locals.to_vec();
    if scope.len() <= var {
        scope.resize(var + 1, None);
    }
    scope
}

fn as_bool(v: Value) -> Result<bool, EvalError> {
    v.as_bool().ok_or(EvalError::Type {
        expected: "bool",
        found: v,
    })
}

fn as_int(v: Value) -> Result<i64, EvalError> {
    v.as_int().ok_or(EvalError::Type {
        expected: "int",
        found: v,
    })
}
