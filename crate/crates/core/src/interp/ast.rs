//! Instruction and expression trees for method bodies.
//!
//! Bodies are data, not closures: the actor and the planner walk the same
//! tree, and the tree is what the step pointer addresses.

use crate::model::{ActionId, FamilyId, RigidId, TaskId, TypeId, Value};

/// Handle to a local slot of a method or action scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Min,
    Max,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Value),
    Var(usize),
    /// State-variable read `family(args)`.
    Sv(FamilyId, Vec<Expr>),
    Rigid(RigidId, Vec<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    /// Element of `over` minimizing the integer `score` (with `var` bound to
    /// the element); first in set order on ties, `none` on an empty set.
    ArgMin {
        var: usize,
        over: Box<SetExpr>,
        score: Box<Expr>,
    },
    ArgMax {
        var: usize,
        over: Box<SetExpr>,
        score: Box<Expr>,
    },
    Member(Box<Expr>, Box<SetExpr>),
    Count(Box<SetExpr>),
}

/// Finite, deterministically ordered sets.
#[derive(Clone, Debug, PartialEq)]
pub enum SetExpr {
    All(TypeId),
    List(Vec<Expr>),
    Filter {
        var: usize,
        over: Box<SetExpr>,
        cond: Expr,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instr {
    Action(ActionId, Vec<Expr>),
    Subtask(TaskId, Vec<Expr>),
    Assign(usize, Expr),
    If(Expr, Vec<Instr>, Vec<Instr>),
    While(Expr, Vec<Instr>),
    ForIn(usize, SetExpr, Vec<Instr>),
    Fail,
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::Var(v.0)
    }
}

impl From<Value> for Expr {
    fn from(v: Value) -> Self {
        Expr::Const(v)
    }
}

impl From<bool> for Expr {
    fn from(b: bool) -> Self {
        Expr::Const(Value::Bool(b))
    }
}

impl From<i64> for Expr {
    fn from(i: i64) -> Self {
        Expr::Const(Value::Int(i))
    }
}

impl From<i32> for Expr {
    fn from(i: i32) -> Self {
        Expr::Const(Value::Int(i as i64))
    }
}

/// Terse constructors used by domain definitions.
pub mod dsl {
    use super::*;

    /// Parameter `i` of the enclosing action (or method) scope.
    pub fn arg(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn none() -> Expr {
        Expr::Const(Value::None)
    }

    pub fn sv<const N: usize>(family: FamilyId, args: [Expr; N]) -> Expr {
        Expr::Sv(family, args.into())
    }

    pub fn rigid<const N: usize>(r: RigidId, args: [Expr; N]) -> Expr {
        Expr::Rigid(r, args.into())
    }

    fn bin(op: BinOp, a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        Expr::Bin(op, Box::new(a.into()), Box::new(b.into()))
    }

    pub fn eq(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Eq, a, b)
    }
    pub fn ne(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Ne, a, b)
    }
    pub fn lt(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Lt, a, b)
    }
    pub fn le(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Le, a, b)
    }
    pub fn gt(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Gt, a, b)
    }
    pub fn ge(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Ge, a, b)
    }
    pub fn and(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::And, a, b)
    }
    pub fn or(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Or, a, b)
    }
    pub fn add(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Add, a, b)
    }
    pub fn sub(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Sub, a, b)
    }
    pub fn mul(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Mul, a, b)
    }
    pub fn min(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Min, a, b)
    }
    pub fn max(a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        bin(BinOp::Max, a, b)
    }

    /// Conjunction of all terms; `true` when empty.
    pub fn all_of<const N: usize>(terms: [Expr; N]) -> Expr {
        terms
            .into_iter()
            .reduce(and)
            .unwrap_or(Expr::Const(Value::Bool(true)))
    }

    pub fn not(a: impl Into<Expr>) -> Expr {
        Expr::Not(Box::new(a.into()))
    }

    pub fn ite(c: impl Into<Expr>, a: impl Into<Expr>, b: impl Into<Expr>) -> Expr {
        Expr::If(Box::new(c.into()), Box::new(a.into()), Box::new(b.into()))
    }

    pub fn argmin(var: Var, over: SetExpr, score: impl Into<Expr>) -> Expr {
        Expr::ArgMin {
            var: var.0,
            over: Box::new(over),
            score: Box::new(score.into()),
        }
    }

    pub fn argmax(var: Var, over: SetExpr, score: impl Into<Expr>) -> Expr {
        Expr::ArgMax {
            var: var.0,
            over: Box::new(over),
            score: Box::new(score.into()),
        }
    }

    pub fn member(e: impl Into<Expr>, set: SetExpr) -> Expr {
        Expr::Member(Box::new(e.into()), Box::new(set))
    }

    pub fn count(set: SetExpr) -> Expr {
        Expr::Count(Box::new(set))
    }

    pub fn all(ty: TypeId) -> SetExpr {
        SetExpr::All(ty)
    }

    pub fn list<const N: usize>(items: [Expr; N]) -> SetExpr {
        SetExpr::List(items.into())
    }

    pub fn filter(var: Var, over: SetExpr, cond: impl Into<Expr>) -> SetExpr {
        SetExpr::Filter {
            var: var.0,
            over: Box::new(over),
            cond: cond.into(),
        }
    }

    pub fn act<const N: usize>(a: ActionId, args: [Expr; N]) -> Instr {
        Instr::Action(a, args.into())
    }

    pub fn subtask<const N: usize>(t: TaskId, args: [Expr; N]) -> Instr {
        Instr::Subtask(t, args.into())
    }

    pub fn assign(v: Var, e: impl Into<Expr>) -> Instr {
        Instr::Assign(v.0, e.into())
    }

    pub fn if_(c: impl Into<Expr>, then: Vec<Instr>, otherwise: Vec<Instr>) -> Instr {
        Instr::If(c.into(), then, otherwise)
    }

    pub fn while_(c: impl Into<Expr>, body: Vec<Instr>) -> Instr {
        Instr::While(c.into(), body)
    }

    pub fn for_in(v: Var, set: SetExpr, body: Vec<Instr>) -> Instr {
        Instr::ForIn(v.0, set, body)
    }

    pub fn fail() -> Instr {
        Instr::Fail
    }
}
