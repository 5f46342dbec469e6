use thiserror::Error;

use super::domain::{MethodInstance, Task};
use super::state::State;
use crate::interp::StepPointer;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("empty refinement stack")]
pub struct EmptyStack;

/// One `(task, method, step)` tuple of a refinement stack.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub task: Task,
    pub method: Option<MethodInstance>,
    pub step: Option<StepPointer>,
}

impl Frame {
    /// A task that has not been given a method yet.
    pub fn unrefined(task: Task) -> Self {
        Frame {
            task,
            method: None,
            step: None,
        }
    }
}

/// LIFO list of frames; the last element is the top.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RefinementStack {
    frames: Vec<Frame>,
}

impl RefinementStack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stack with `frames` listed bottom to top.
    pub fn from_frames(frames: Vec<Frame>) -> Self {
        RefinementStack { frames }
    }

    pub fn push(&mut self, f: Frame) {
        self.frames.push(f);
    }

    pub fn pop(&mut self) -> Result<Frame, EmptyStack> {
        self.frames.pop().ok_or(EmptyStack)
    }

    pub fn top(&self) -> Result<&Frame, EmptyStack> {
        self.frames.last().ok_or(EmptyStack)
    }

    pub fn top_mut(&mut self) -> Result<&mut Frame, EmptyStack> {
        self.frames.last_mut().ok_or(EmptyStack)
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    /// Frames from bottom (root task) to top.
    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub(crate) fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.frames.len() as u32).to_le_bytes());
        for f in &self.frames {
            out.extend_from_slice(&(f.task.id.0 as u32).to_le_bytes());
            write_values(&f.task.args, out);
            match &f.method {
                None => out.push(0),
                Some(m) => {
                    out.push(1);
                    out.extend_from_slice(&(m.method.0 as u32).to_le_bytes());
                    write_values(&m.binding, out);
                }
            }
            match &f.step {
                None => out.push(0),
                Some(p) => {
                    out.push(1);
                    p.write_canonical(out);
                }
            }
        }
    }
}

pub(crate) fn write_values(vs: &[crate::model::Value], out: &mut Vec<u8>) {
    out.push(vs.len() as u8);
    for v in vs {
        v.write_canonical(out);
    }
}

/// Canonical key of an `(s, σ)` pair. Keys compare by full content, so equal
/// keys mean equal pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(Vec<u8>);

impl Digest {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Short stable hash for logs.
    pub fn short(&self) -> u64 {
        crate::sim::rng::fnv1a(&self.0)
    }
}

pub fn digest(s: &State, stack: &RefinementStack) -> Digest {
    let mut out = Vec::with_capacity(s.values().len() * 9 + 64 * stack.len());
    s.write_canonical(&mut out);
    stack.write_canonical(&mut out);
    Digest(out)
}
