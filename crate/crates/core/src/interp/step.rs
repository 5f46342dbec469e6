use std::sync::Arc;

use super::ast::Instr;
use super::eval::{eval, eval_bool, eval_set, EvalError};
use super::InterpError;
use crate::model::{Domain, MethodInstance, State, Value};

/// Upper bound on control-flow resolutions between two primitive steps.
/// A loop whose body never reaches a primitive instruction hits it.
const RESOLVE_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Ctx {
    Body,
    Then,
    Else,
    Loop,
    Each { items: Arc<[Value]>, pos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Level {
    index: usize,
    ctx: Ctx,
}

/// Position inside a method body: a path of block indices through enclosing
/// `If`/`While`/`ForIn` instructions, loop cursors, and the method's locals.
///
/// A pointer is kept resolved: it always addresses a primitive instruction
/// (action, subtask, assignment, fail) or the end of the body.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepPointer {
    levels: Vec<Level>,
    locals: Vec<Option<Value>>,
}

impl StepPointer {
    /// Pointer at the first step of `method`'s body, resolved against `s`.
    pub fn start(dom: &Domain, s: &State, method: &MethodInstance) -> Result<Self, InterpError> {
        let t = dom.method(method.method);
        let mut locals = vec![None; t.n_slots()];
        for (i, v) in method.binding.iter().enumerate() {
            locals[i] = Some(*v);
        }
        let mut p = StepPointer {
            levels: vec![Level {
                index: 0,
                ctx: Ctx::Body,
            }],
            locals,
        };
        p.resolve(dom, s, &t.body)?;
        Ok(p)
    }

    pub fn is_end(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn locals(&self) -> &[Option<Value>] {
        &self.locals
    }

    pub(crate) fn set_local(&mut self, slot: usize, v: Value) {
        if self.locals.len() <= slot {
            self.locals.resize(slot + 1, None);
        }
        self.locals[slot] = Some(v);
    }

    /// Instruction addressed by the pointer; `None` at end of body.
    pub fn current<'b>(&self, body: &'b [Instr]) -> Result<Option<&'b Instr>, InterpError> {
        match self.levels.last() {
            None => Ok(None),
            Some(l) => Ok(Some(
                block_of(body, &self.levels)?
                    .get(l.index)
                    .ok_or(InterpError::Malformed)?,
            )),
        }
    }

    /// Moves past the current primitive instruction and resolves control flow.
    pub(crate) fn advance(
        &mut self,
        dom: &Domain,
        s: &State,
        body: &[Instr],
    ) -> Result<(), InterpError> {
        let last = self.levels.last_mut().ok_or(InterpError::Malformed)?;
        last.index += 1;
        self.resolve(dom, s, body)
    }

    fn resolve(&mut self, dom: &Domain, s: &State, body: &[Instr]) -> Result<(), InterpError> {
        for _ in 0..RESOLVE_LIMIT {
            let Some(last) = self.levels.last() else {
                return Ok(());
            };
            let index = last.index;
            let block = block_of(body, &self.levels)?;
            if index >= block.len() {
                let finished = self.levels.pop().ok_or(InterpError::Malformed)?;
                if self.levels.is_empty() {
                    return Ok(());
                }
                match finished.ctx {
                    Ctx::Then | Ctx::Else => self.bump(),
                    // guard is re-evaluated at the loop head
                    Ctx::Loop => {}
                    Ctx::Each { items, pos } => {
                        if pos + 1 < items.len() {
                            let parent = block_of(body, &self.levels)?;
                            let var = match parent.get(self.levels.last().map_or(0, |l| l.index)) {
                                Some(Instr::ForIn(v, _, _)) => *v,
                                _ => return Err(InterpError::Malformed),
                            };
                            self.set_local(var, items[pos + 1]);
                            self.levels.push(Level {
                                index: 0,
                                ctx: Ctx::Each {
                                    items,
                                    pos: pos + 1,
                                },
                            });
                        } else {
                            self.bump();
                        }
                    }
                    Ctx::Body => return Err(InterpError::Malformed),
                }
                continue;
            }
            match &block[index] {
                Instr::If(c, _, _) => {
                    let ctx = if eval_bool(dom, s, &self.locals, c)? {
                        Ctx::Then
                    } else {
                        Ctx::Else
                    };
                    self.levels.push(Level { index: 0, ctx });
                }
                Instr::While(c, _) => {
                    if eval_bool(dom, s, &self.locals, c)? {
                        self.levels.push(Level {
                            index: 0,
                            ctx: Ctx::Loop,
                        });
                    } else {
                        self.bump();
                    }
                }
                Instr::ForIn(v, set, _) => {
                    let items = eval_set(dom, s, &self.locals, set)?;
                    if items.is_empty() {
                        self.bump();
                    } else {
                        self.set_local(*v, items[0]);
                        self.levels.push(Level {
                            index: 0,
                            ctx: Ctx::Each {
                                items: items.into(),
                                pos: 0,
                            },
                        });
                    }
                }
                _ => return Ok(()),
            }
        }
        Err(InterpError::NonProgressingLoop)
    }

    fn bump(&mut self) {
        if let Some(l) = self.levels.last_mut() {
            l.index += 1;
        }
    }

    pub fn eval(&self, dom: &Domain, s: &State, e: &super::ast::Expr) -> Result<Value, EvalError> {
        eval(dom, s, &self.locals, e)
    }

    pub(crate) fn write_canonical(&self, out: &mut Vec<u8>) {
        out.push(self.levels.len() as u8);
        for l in &self.levels {
            out.extend_from_slice(&(l.index as u32).to_le_bytes());
            match &l.ctx {
                Ctx::Body => out.push(0),
                Ctx::Then => out.push(1),
                Ctx::Else => out.push(2),
                Ctx::Loop => out.push(3),
                Ctx::Each { items, pos } => {
                    out.push(4);
                    out.extend_from_slice(&(*pos as u32).to_le_bytes());
                    crate::model::stack_values(items, out);
                }
            }
        }
        out.push(self.locals.len() as u8);
        for v in &self.locals {
            match v {
                None => out.push(0xff),
                Some(v) => v.write_canonical(out),
            }
        }
    }
}

/// Block indexed by the last level of `levels`.
fn block_of<'b>(body: &'b [Instr], levels: &[Level]) -> Result<&'b [Instr], InterpError> {
    let mut block = body;
    for w in levels.windows(2) {
        let instr = block.get(w[0].index).ok_or(InterpError::Malformed)?;
        block = match (instr, &w[1].ctx) {
            (Instr::If(_, t, _), Ctx::Then) => t,
            (Instr::If(_, _, e), Ctx::Else) => e,
            (Instr::While(_, b), Ctx::Loop) => b,
            (Instr::ForIn(_, _, b), Ctx::Each { .. }) => b,
            _ => return Err(InterpError::Malformed),
        };
    }
    Ok(block)
}
