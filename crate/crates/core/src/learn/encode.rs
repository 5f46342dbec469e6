use thiserror::Error;

use crate::model::{Domain, MethodId, State, Task};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("value of {var} lies outside its declared range")]
    OutOfRange { var: String },
    #[error("state has {found} variables, the domain declares {expected}")]
    Shape { expected: usize, found: usize },
}

/// Binary feature vector stored as the positions of its ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Encoding {
    pub width: usize,
    pub hot: Vec<usize>,
}

impl Encoding {
    pub fn dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.width];
        for &i in &self.hot {
            v[i] = 1.0;
        }
        v
    }
}

/// One-hot layout: one `N`-wide block per state variable (`N` the largest
/// range), then one slot per task name, then (heuristic inputs only) one
/// slot per method template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub vars: usize,
    pub block: usize,
    pub tasks: usize,
    pub methods: usize,
}

impl Layout {
    pub fn of(dom: &Domain) -> Self {
        Layout {
            vars: dom.n_vars(),
            block: dom.max_range(),
            tasks: dom.tasks().len(),
            methods: dom.methods().len(),
        }
    }

    pub fn lm_width(&self) -> usize {
        self.vars * self.block + self.tasks
    }

    pub fn lh_width(&self) -> usize {
        self.lm_width() + self.methods
    }
}

fn state_hot(
    dom: &Domain,
    layout: &Layout,
    s: &State,
    out: &mut Vec<usize>,
) -> Result<(), EncodeError> {
    if s.values().len() != layout.vars {
        return Err(EncodeError::Shape {
            expected: layout.vars,
            found: s.values().len(),
        });
    }
    for (slot, v) in s.values().iter().enumerate() {
        let p = dom
            .var_range(slot)
            .position(*v)
            .ok_or_else(|| EncodeError::OutOfRange {
                var: dom.var_name(slot),
            })?;
        out.push(slot * layout.block + p);
    }
    Ok(())
}

/// `[w_s, w_τ]`.
pub fn encode_lm(dom: &Domain, s: &State, task: &Task) -> Result<Encoding, EncodeError> {
    let layout = Layout::of(dom);
    let mut hot = Vec::with_capacity(layout.vars + 1);
    state_hot(dom, &layout, s, &mut hot)?;
    hot.push(layout.vars * layout.block + task.id.index());
    Ok(Encoding {
        width: layout.lm_width(),
        hot,
    })
}

/// `[w_s, w_τ, w_m]`.
pub fn encode_lh(
    dom: &Domain,
    s: &State,
    task: &Task,
    method: MethodId,
) -> Result<Encoding, EncodeError> {
    let layout = Layout::of(dom);
    let mut e = encode_lm(dom, s, task)?;
    e.hot.push(layout.lm_width() + method.index());
    e.width = layout.lh_width();
    Ok(e)
}

/// Recovers each variable's value index from a state block.
pub fn decode_state_blocks(layout: &Layout, e: &Encoding) -> Vec<usize> {
    e.hot
        .iter()
        .filter(|&&i| i < layout.vars * layout.block)
        .map(|&i| i % layout.block)
        .collect()
}
