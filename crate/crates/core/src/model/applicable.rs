use super::domain::{Domain, MethodInstance, Task};
use super::state::State;
use super::value::Value;
use crate::interp::eval::eval;

/// Every method instance for `task` whose precondition holds in `s`.
///
/// Order: template declaration order, then lexicographic over the free
/// parameters' candidate lists (first free parameter most significant).
pub fn applicable(dom: &Domain, s: &State, task: &Task) -> Vec<MethodInstance> {
    let mut out = Vec::new();
    for &mid in dom.methods_for(task.id) {
        let m = dom.method(mid);
        let k = task.args.len();
        let free: Vec<&[Value]> = m.params[k..]
            .iter()
            .map(|p| {
                p.candidates
                    .as_deref()
                    .unwrap_or_else(|| dom.ty(p.ty).values())
            })
            .collect();
        if free.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut locals: Vec<Option<Value>> = vec![None; m.n_slots()];
        for (i, a) in task.args.iter().enumerate() {
            locals[i] = Some(*a);
        }
        let mut cursor = vec![0usize; free.len()];
        'bindings: loop {
            for (j, c) in cursor.iter().enumerate() {
                locals[k + j] = Some(free[j][*c]);
            }
            match eval(dom, s, &locals, &m.pre) {
                Ok(Value::Bool(true)) => out.push(MethodInstance {
                    method: mid,
                    binding: locals[..m.params.len()]
                        .iter()
                        .map(|v| v.unwrap_or(Value::None))
                        .collect(),
                }),
                Ok(_) => {}
                Err(e) => log::warn!("precondition of {} not evaluable: {e}", m.name),
            }
            // odometer, last free parameter fastest
            let mut j = free.len();
            loop {
                if j == 0 {
                    break 'bindings;
                }
                j -= 1;
                cursor[j] += 1;
                if cursor[j] < free[j].len() {
                    continue 'bindings;
                }
                cursor[j] = 0;
            }
        }
    }
    out
}

/// Re-checks an instance's precondition in `s`.
pub fn precondition_holds(dom: &Domain, s: &State, m: &MethodInstance) -> bool {
    let t = dom.method(m.method);
    let mut locals: Vec<Option<Value>> = vec![None; t.n_slots()];
    for (i, v) in m.binding.iter().enumerate() {
        locals[i] = Some(*v);
    }
    matches!(eval(dom, s, &locals, &t.pre), Ok(Value::Bool(true)))
}
