//! Method-body instructions and the single-step successor function over
//! refinement stacks.

pub mod ast;
pub mod eval;
mod step;

use thiserror::Error;

pub use ast::{BinOp, Expr, Instr, SetExpr, Var};
pub use eval::{eval, eval_bool, eval_set, EvalError};
pub use step::StepPointer;

use crate::model::{
    Domain, EmptyStack, Frame, GroundAction, MethodInstance, RefinementStack, State, Task,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error(transparent)]
    EmptyStack(#[from] EmptyStack),
    #[error("top frame has no method instance")]
    NoMethod,
    #[error("malformed step pointer")]
    Malformed,
    #[error("loop made no progress to a primitive step")]
    NonProgressingLoop,
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

/// Instruction under the top frame's pointer, `None` at end of body.
pub fn current_instr<'d>(
    dom: &'d Domain,
    stack: &RefinementStack,
) -> Result<Option<&'d Instr>, InterpError> {
    let top = stack.top()?;
    let (m, p) = method_and_pointer(top)?;
    p.current(&dom.method(m.method).body)
}

fn method_and_pointer(f: &Frame) -> Result<(&MethodInstance, &StepPointer), InterpError> {
    match (&f.method, &f.step) {
        (Some(m), Some(p)) => Ok((m, p)),
        _ => Err(InterpError::NoMethod),
    }
}

/// The stack after the top frame's current step has completed in `s`.
pub fn next(
    dom: &Domain,
    stack: &RefinementStack,
    s: &State,
) -> Result<RefinementStack, InterpError> {
    let mut out = stack.clone();
    advance(dom, &mut out, s)?;
    Ok(out)
}

/// In-place [`next`].
pub fn advance(dom: &Domain, stack: &mut RefinementStack, s: &State) -> Result<(), InterpError> {
    let top = stack.top_mut()?;
    let m = top.method.as_ref().ok_or(InterpError::NoMethod)?.method;
    let p = top.step.as_mut().ok_or(InterpError::NoMethod)?;
    p.advance(dom, s, &dom.method(m).body)?;
    settle(dom, stack, s)
}

/// Pops every top frame whose body is finished, advancing the frame below
/// (which is waiting at the completed subtask) after each pop.
pub fn settle(dom: &Domain, stack: &mut RefinementStack, s: &State) -> Result<(), InterpError> {
    loop {
        let Ok(top) = stack.top() else {
            return Ok(());
        };
        match &top.step {
            Some(p) if p.is_end() => {
                stack.pop()?;
                if stack.is_empty() {
                    return Ok(());
                }
                let top = stack.top_mut()?;
                let m = top.method.as_ref().ok_or(InterpError::NoMethod)?.method;
                let p = top.step.as_mut().ok_or(InterpError::NoMethod)?;
                p.advance(dom, s, &dom.method(m).body)?;
            }
            _ => return Ok(()),
        }
    }
}

/// Sets `method` on the (unrefined or failed) top frame and points it at the
/// first step of the body. A body that resolves to nothing completes at once.
pub fn begin(
    dom: &Domain,
    stack: &mut RefinementStack,
    s: &State,
    method: MethodInstance,
) -> Result<(), InterpError> {
    let p = StepPointer::start(dom, s, &method)?;
    let top = stack.top_mut()?;
    top.method = Some(method);
    top.step = Some(p);
    settle(dom, stack, s)
}

/// Pushes `task` refined by `method`, pointer at its first step.
pub fn push_refined(
    dom: &Domain,
    stack: &mut RefinementStack,
    s: &State,
    task: Task,
    method: MethodInstance,
) -> Result<(), InterpError> {
    stack.push(Frame::unrefined(task));
    begin(dom, stack, s, method)
}

fn top_pointer(stack: &RefinementStack) -> Result<&StepPointer, InterpError> {
    stack.top()?.step.as_ref().ok_or(InterpError::NoMethod)
}

/// Grounds an action instruction's arguments with the top frame's locals.
pub fn ground_action(
    dom: &Domain,
    stack: &RefinementStack,
    s: &State,
    action: crate::model::ActionId,
    args: &[Expr],
) -> Result<GroundAction, InterpError> {
    let p = top_pointer(stack)?;
    let args = args
        .iter()
        .map(|e| p.eval(dom, s, e))
        .collect::<Result<_, _>>()?;
    Ok(GroundAction { action, args })
}

pub fn ground_task(
    dom: &Domain,
    stack: &RefinementStack,
    s: &State,
    task: crate::model::TaskId,
    args: &[Expr],
) -> Result<Task, InterpError> {
    let p = top_pointer(stack)?;
    let args = args
        .iter()
        .map(|e| p.eval(dom, s, e))
        .collect::<Result<_, _>>()?;
    Ok(Task { id: task, args })
}

/// Executes an assignment at the top frame and advances past it.
pub fn assign(
    dom: &Domain,
    stack: &mut RefinementStack,
    s: &State,
    slot: usize,
    e: &Expr,
) -> Result<(), InterpError> {
    let v = top_pointer(stack)?.eval(dom, s, e)?;
    let top = stack.top_mut()?;
    top.step
        .as_mut()
        .ok_or(InterpError::NoMethod)?
        .set_local(slot, v);
    advance(dom, stack, s)
}
