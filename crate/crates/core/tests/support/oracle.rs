//! Exact expected efficiency by exhaustive enumeration of outcome trees.
//!
//! Walks method bodies with the interpreter only. At a decision node the
//! oracle commits to the method with the highest expected efficiency of the
//! remaining rollout, which is what per-node rollout statistics converge to.

use rae_core::interp::{self, Instr};
use rae_core::model::{applicable, Domain, Frame, MethodInstance, RefinementStack, State};
use rae_core::sim::{apply_effects, outcome_cost};

/// Distribution over the cost still to be paid; `None` is failure.
pub type Dist = Vec<(f64, Option<f64>)>;

pub fn expected_efficiency(d: &Dist) -> f64 {
    d.iter()
        .map(|(p, c)| match c {
            Some(c) => p / c,
            None => 0.0,
        })
        .sum()
}

fn shift(d: Dist, cost: f64, p: f64) -> Dist {
    d.into_iter()
        .map(|(q, c)| (p * q, c.map(|c| c + cost)))
        .collect()
}

fn choose(dom: &Domain, s: &State, options: Vec<RefinementStack>) -> Dist {
    let mut best: Option<(f64, Dist)> = None;
    for st in options {
        let d = remaining(dom, s, st);
        let v = expected_efficiency(&d);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, d));
        }
    }
    best.map_or_else(|| vec![(1.0, None)], |(_, d)| d)
}

/// Cost distribution of running `stack` to completion from `s`.
pub fn remaining(dom: &Domain, s: &State, mut stack: RefinementStack) -> Dist {
    if stack.is_empty() {
        return vec![(1.0, Some(0.0))];
    }
    let top = stack.top().unwrap().clone();
    if top.method.is_none() {
        let options = applicable(dom, s, &top.task)
            .into_iter()
            .map(|m| {
                let mut st = stack.clone();
                interp::begin(dom, &mut st, s, m).unwrap();
                st
            })
            .collect();
        return choose(dom, s, options);
    }
    match interp::current_instr(dom, &stack).unwrap().cloned() {
        Some(Instr::Subtask(t, args)) => {
            let task = interp::ground_task(dom, &stack, s, t, &args).unwrap();
            let options = applicable(dom, s, &task)
                .into_iter()
                .map(|m| {
                    let mut st = stack.clone();
                    interp::push_refined(dom, &mut st, s, task.clone(), m).unwrap();
                    st
                })
                .collect();
            choose(dom, s, options)
        }
        Some(Instr::Action(a, args)) => {
            let ga = interp::ground_action(dom, &stack, s, a, &args).unwrap();
            let spec = dom.action(a);
            if let Some(pre) = &spec.pre {
                let locals: Vec<_> = ga.args.iter().map(|v| Some(*v)).collect();
                if !interp::eval_bool(dom, s, &locals, pre).unwrap() {
                    return vec![(1.0, None)];
                }
            }
            let mut out = Dist::new();
            for o in &spec.outcomes {
                if o.prob == 0.0 {
                    continue;
                }
                if o.failed {
                    out.push((o.prob, None));
                    continue;
                }
                let s2 = apply_effects(dom, s, &ga, o).unwrap();
                let c = outcome_cost(dom, s, &ga, o).unwrap();
                let mut st = stack.clone();
                interp::advance(dom, &mut st, &s2).unwrap();
                out.extend(shift(remaining(dom, &s2, st), c, o.prob));
            }
            out
        }
        Some(Instr::Assign(slot, e)) => {
            interp::assign(dom, &mut stack, s, slot, &e).unwrap();
            remaining(dom, s, stack)
        }
        Some(Instr::Fail) => vec![(1.0, None)],
        other => panic!("unresolved step {other:?}"),
    }
}

/// Exact `Q*(m)` of every applicable root method for `task` in `s`.
pub fn root_values(
    dom: &Domain,
    s: &State,
    task: &rae_core::model::Task,
) -> Vec<(MethodInstance, f64)> {
    applicable(dom, s, task)
        .into_iter()
        .map(|m| {
            let mut st = RefinementStack::new();
            st.push(Frame::unrefined(task.clone()));
            interp::begin(dom, &mut st, s, m.clone()).unwrap();
            (m, expected_efficiency(&remaining(dom, s, st)))
        })
        .collect()
}
