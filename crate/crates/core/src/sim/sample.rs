use thiserror::Error;

use super::rng::SimRng;
use crate::interp::eval::{eval, eval_bool, EvalError};
use crate::model::{CostSpec, Domain, GroundAction, Outcome, State, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("evaluation failed in {action}: {source}")]
    Eval { action: String, source: EvalError },
    #[error("{action}: effect writes {value} outside the range of {var}")]
    EffectRange {
        action: String,
        var: String,
        value: String,
    },
    #[error("{action}: outcome {outcome} has non-positive cost {cost}")]
    NonPositiveCost {
        action: String,
        outcome: String,
        cost: f64,
    },
}

/// Result of drawing one outcome of an action.
#[derive(Clone, Debug, PartialEq)]
pub enum Sampled {
    Success {
        state: State,
        cost: f64,
        outcome: usize,
    },
    /// `outcome` is `None` when the precondition did not hold.
    Failed { cost: f64, outcome: Option<usize> },
}

fn locals_of(a: &GroundAction) -> Vec<Option<Value>> {
    a.args.iter().map(|v| Some(*v)).collect()
}

/// Draws one outcome of `a` in `s` by the declared probabilities (exactly one
/// uniform draw from `rng` when the precondition holds, none otherwise).
///
/// An argument outside its parameter's type counts as an unmet
/// precondition: the value was read from a state that has since moved on.
pub fn sample(
    dom: &Domain,
    s: &State,
    a: &GroundAction,
    rng: &mut SimRng,
) -> Result<Sampled, SimError> {
    let spec = dom.action(a.action);
    let locals = locals_of(a);
    let wrap = |source| SimError::Eval {
        action: dom.fmt_action(a),
        source,
    };
    let well_typed = a.args.len() == spec.params.len()
        && a.args
            .iter()
            .zip(&spec.params)
            .all(|(v, p)| dom.ty(p.ty).contains(*v));
    if !well_typed {
        log::warn!(
            "{} has an argument outside its declared type",
            dom.fmt_action(a)
        );
        return Ok(Sampled::Failed {
            cost: 0.0,
            outcome: None,
        });
    }
    if let Some(pre) = &spec.pre {
        if !eval_bool(dom, s, &locals, pre).map_err(wrap)? {
            return Ok(Sampled::Failed {
                cost: 0.0,
                outcome: None,
            });
        }
    }
    let u = rng.next_f64();
    let idx = pick(&spec.outcomes, u);
    let o = &spec.outcomes[idx];
    let cost = outcome_cost(dom, s, a, o)?;
    if o.failed {
        return Ok(Sampled::Failed {
            cost,
            outcome: Some(idx),
        });
    }
    let state = apply_effects(dom, s, a, o)?;
    Ok(Sampled::Success {
        state,
        cost,
        outcome: idx,
    })
}

fn pick(outcomes: &[Outcome], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, o) in outcomes.iter().enumerate() {
        acc += o.prob;
        if u < acc {
            return i;
        }
    }
    // rounding slack lands on the last outcome with mass
    outcomes
        .iter()
        .rposition(|o| o.prob > 0.0)
        .unwrap_or(outcomes.len() - 1)
}

pub fn outcome_cost(
    dom: &Domain,
    s: &State,
    a: &GroundAction,
    o: &Outcome,
) -> Result<f64, SimError> {
    let cost = match &o.cost {
        CostSpec::Fixed(c) => *c,
        CostSpec::Expr(e) => {
            let v = eval(dom, s, &locals_of(a), e).map_err(|source| SimError::Eval {
                action: dom.fmt_action(a),
                source,
            })?;
            match v {
                Value::Int(i) => i as f64,
                other => {
                    return Err(SimError::Eval {
                        action: dom.fmt_action(a),
                        source: EvalError::Type {
                            expected: "int",
                            found: other,
                        },
                    })
                }
            }
        }
    };
    if !o.failed && cost <= 0.0 {
        return Err(SimError::NonPositiveCost {
            action: dom.fmt_action(a),
            outcome: o.label.clone(),
            cost,
        });
    }
    Ok(cost)
}

/// Applies all effects of `o` simultaneously: every argument and value is
/// evaluated in the pre-action state.
pub fn apply_effects(
    dom: &Domain,
    s: &State,
    a: &GroundAction,
    o: &Outcome,
) -> Result<State, SimError> {
    let locals = locals_of(a);
    let wrap = |source| SimError::Eval {
        action: dom.fmt_action(a),
        source,
    };
    let mut writes = Vec::with_capacity(o.effects.len());
    for eff in &o.effects {
        let args = eff
            .args
            .iter()
            .map(|e| eval(dom, s, &locals, e))
            .collect::<Result<Vec<_>, _>>()
            .map_err(wrap)?;
        let v = eval(dom, s, &locals, &eff.value).map_err(wrap)?;
        let slot = dom
            .slot(eff.family, &args)
            .ok_or_else(|| SimError::EffectRange {
                action: dom.fmt_action(a),
                var: dom.family(eff.family).name.clone(),
                value: "arguments".into(),
            })?;
        writes.push((slot, v));
    }
    let mut out = s.clone();
    for (slot, v) in writes {
        out.set(dom, slot, v).map_err(|_| SimError::EffectRange {
            action: dom.fmt_action(a),
            var: dom.var_name(slot),
            value: dom.display(v).to_string(),
        })?;
    }
    Ok(out)
}
