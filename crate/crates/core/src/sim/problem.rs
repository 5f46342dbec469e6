use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use super::env::{ExoEffect, ExoEvent};
use crate::model::{Domain, State, StateError, Task, Value};

pub const PROBLEM_FORMAT: &str = "rae-problem/1";

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported problem format {0:?}")]
    Format(String),
    #[error("problem is for domain {found:?}, not {expected:?}")]
    Domain { expected: String, found: String },
    #[error("{at}: {msg}")]
    Invalid { at: String, msg: String },
    #[error("initial state: {0}")]
    State(#[from] StateError),
}

fn invalid(at: impl Into<String>, msg: impl Into<String>) -> ProblemError {
    ProblemError::Invalid {
        at: at.into(),
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arrival {
    pub tick: u64,
    pub task: Task,
}

/// One acting problem: initial state, root-task arrivals and an exogenous
/// event schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub id: String,
    pub domain: String,
    pub seed: u64,
    pub initial: State,
    /// Sorted by tick.
    pub arrivals: Vec<Arrival>,
    /// Sorted by tick.
    pub events: Vec<ExoEvent>,
}

impl Problem {
    pub fn to_json(&self, dom: &Domain) -> Json {
        let arrivals: Vec<Json> = self
            .arrivals
            .iter()
            .map(|a| {
                let mut o = task_to_json(dom, &a.task);
                o.insert("tick".into(), json!(a.tick));
                Json::Object(o)
            })
            .collect();
        let events: Vec<Json> = self
            .events
            .iter()
            .map(|e| {
                let mut o = match &e.effect {
                    ExoEffect::Task(t) => task_to_json(dom, t),
                    ExoEffect::Mutate(writes) => {
                        let mut set = Map::new();
                        for (slot, v) in writes {
                            set.insert(dom.var_name(*slot), dom.value_to_json(*v));
                        }
                        let mut o = Map::new();
                        o.insert("set".into(), Json::Object(set));
                        o
                    }
                };
                o.insert("tick".into(), json!(e.tick));
                Json::Object(o)
            })
            .collect();
        json!({
            "format": PROBLEM_FORMAT,
            "domain": self.domain,
            "id": self.id,
            "seed": self.seed,
            "initial_state": self.initial.to_json(dom),
            "arrivals": arrivals,
            "events": events,
        })
    }

    pub fn to_string_pretty(&self, dom: &Domain) -> String {
        let mut s =
            serde_json::to_string_pretty(&self.to_json(dom)).expect("json values always serialize");
        s.push('\n');
        s
    }

    pub fn parse(dom: &Domain, text: &str) -> Result<Problem, ProblemError> {
        Problem::from_json(dom, &serde_json::from_str(text)?)
    }

    pub fn from_json(dom: &Domain, j: &Json) -> Result<Problem, ProblemError> {
        let format = j.get("format").and_then(Json::as_str).unwrap_or_default();
        if format != PROBLEM_FORMAT {
            return Err(ProblemError::Format(format.to_string()));
        }
        let domain = str_field(j, "domain", "problem")?;
        if domain != dom.name() {
            return Err(ProblemError::Domain {
                expected: dom.name().to_string(),
                found: domain,
            });
        }
        let id = str_field(j, "id", "problem")?;
        let seed = j
            .get("seed")
            .and_then(Json::as_u64)
            .ok_or_else(|| invalid("seed", "expected a non-negative integer"))?;
        let initial = State::from_json(dom, j.get("initial_state").unwrap_or(&Json::Null))?;

        let mut arrivals = Vec::new();
        for (i, a) in array_field(j, "arrivals")?.iter().enumerate() {
            let at = format!("arrivals[{i}]");
            arrivals.push(Arrival {
                tick: tick_field(a, &at)?,
                task: parse_task(dom, a, &at)?,
            });
        }
        let mut events = Vec::new();
        for (i, e) in array_field(j, "events")?.iter().enumerate() {
            let at = format!("events[{i}]");
            let tick = tick_field(e, &at)?;
            let effect = if let Some(set) = e.get("set") {
                let set = set
                    .as_object()
                    .ok_or_else(|| invalid(&at, "`set` must be an object"))?;
                let mut writes = Vec::new();
                for (name, v) in set {
                    let slot = dom
                        .slot_by_name(name)
                        .ok_or_else(|| invalid(&at, format!("unknown variable {name}")))?;
                    let v = dom
                        .value_from_json(v)
                        .filter(|v| dom.var_range(slot).contains(*v))
                        .ok_or_else(|| {
                            invalid(&at, format!("value {v} outside the range of {name}"))
                        })?;
                    writes.push((slot, v));
                }
                ExoEffect::Mutate(writes)
            } else {
                ExoEffect::Task(parse_task(dom, e, &at)?)
            };
            events.push(ExoEvent { tick, effect });
        }
        if !arrivals.windows(2).all(|w| w[0].tick <= w[1].tick) {
            return Err(invalid("arrivals", "not sorted by tick"));
        }
        if !events.windows(2).all(|w| w[0].tick <= w[1].tick) {
            return Err(invalid("events", "not sorted by tick"));
        }
        Ok(Problem {
            id,
            domain,
            seed,
            initial,
            arrivals,
            events,
        })
    }
}

/// `{"task": name, "args": [...]}`.
pub fn task_to_json(dom: &Domain, t: &Task) -> Map<String, Json> {
    let mut o = Map::new();
    o.insert(
        "task".into(),
        Json::String(dom.task_decl(t.id).name.clone()),
    );
    o.insert(
        "args".into(),
        Json::Array(t.args.iter().map(|v| dom.value_to_json(*v)).collect()),
    );
    o
}

fn str_field(j: &Json, key: &str, at: &str) -> Result<String, ProblemError> {
    j.get(key)
        .and_then(Json::as_str)
        .map(str::to_string)
        .ok_or_else(|| invalid(at, format!("missing string field `{key}`")))
}

fn array_field<'j>(j: &'j Json, key: &str) -> Result<&'j Vec<Json>, ProblemError> {
    j.get(key)
        .and_then(Json::as_array)
        .ok_or_else(|| invalid(key, "expected an array"))
}

fn tick_field(j: &Json, at: &str) -> Result<u64, ProblemError> {
    j.get("tick")
        .and_then(Json::as_u64)
        .ok_or_else(|| invalid(at, "missing non-negative `tick`"))
}

/// Parses `{"task": name, "args": [...]}` and checks arity and argument types.
pub fn parse_task(dom: &Domain, j: &Json, at: &str) -> Result<Task, ProblemError> {
    let name = str_field(j, "task", at)?;
    let id = dom
        .task_by_name(&name)
        .ok_or_else(|| invalid(at, format!("unknown task {name}")))?;
    let decl = dom.task_decl(id);
    let raw = j
        .get("args")
        .and_then(Json::as_array)
        .cloned()
        .unwrap_or_default();
    if raw.len() != decl.params.len() {
        return Err(invalid(
            at,
            format!(
                "{name} takes {} arguments, got {}",
                decl.params.len(),
                raw.len()
            ),
        ));
    }
    let mut args = Vec::with_capacity(raw.len());
    for (a, ty) in raw.iter().zip(&decl.params) {
        let v: Value = dom
            .value_from_json(a)
            .filter(|v| dom.ty(*ty).contains(*v))
            .ok_or_else(|| invalid(at, format!("argument {a} outside its declared type")))?;
        args.push(v);
    }
    Ok(Task::new(id, args))
}
