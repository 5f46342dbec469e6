use std::io::{BufRead, Write};

use serde_json::{json, Value as Json};
use thiserror::Error;

use super::encode::{encode_lh, encode_lm, EncodeError, Layout};
use super::intervals::IntervalMap;
use super::train::Example;
use crate::engine::{rae_run, EngineConfig, EngineError, RunReport, Selector};
use crate::model::{Domain, MethodId, State, StateError, Task};
use crate::planner::{Heuristic, PlannerConfig};
use crate::sim::{parse_task, task_to_json, Problem, ProblemError};

/// Which decisions become method-learning examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Only methods whose bodies completed.
    SuccessOnly,
    /// Every method the planner committed to.
    All,
}

/// A planner decision observed while acting.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingRecord {
    pub state: State,
    pub task: Task,
    pub method: MethodId,
    pub success: Option<bool>,
    /// Root estimate of the chosen method.
    pub utility: Option<f64>,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    State { line: usize, source: StateError },
    #[error("line {line}: {source}")]
    Task { line: usize, source: ProblemError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl TrainingRecord {
    pub fn to_json(&self, dom: &Domain) -> Json {
        json!({
            "state": self.state.to_json(dom),
            "task": Json::Object(task_to_json(dom, &self.task)),
            "method": dom.method(self.method).name,
            "success": self.success,
            "utility": self.utility,
        })
    }

    pub fn from_json(dom: &Domain, j: &Json, line: usize) -> Result<Self, RecordError> {
        let parse = |msg: &str| RecordError::Parse {
            line,
            msg: msg.to_string(),
        };
        let state = State::from_json(dom, j.get("state").ok_or_else(|| parse("missing state"))?)
            .map_err(|source| RecordError::State { line, source })?;
        let task = parse_task(
            dom,
            j.get("task").ok_or_else(|| parse("missing task"))?,
            "task",
        )
        .map_err(|source| RecordError::Task { line, source })?;
        let name = j
            .get("method")
            .and_then(Json::as_str)
            .ok_or_else(|| parse("missing method"))?;
        let method = dom
            .method_by_name(name)
            .ok_or_else(|| parse(&format!("unknown method {name:?}")))?;
        if dom.method(method).task != task.id {
            return Err(parse(&format!(
                "method {name:?} does not refine the recorded task"
            )));
        }
        let success = match j.get("success") {
            None | Some(Json::Null) => None,
            Some(v) => Some(
                v.as_bool()
                    .ok_or_else(|| parse("success must be a boolean"))?,
            ),
        };
        let utility = match j.get("utility") {
            None | Some(Json::Null) => None,
            Some(v) => Some(
                v.as_f64()
                    .ok_or_else(|| parse("utility must be a number"))?,
            ),
        };
        Ok(TrainingRecord {
            state,
            task,
            method,
            success,
            utility,
        })
    }
}

/// One JSON object per line.
pub fn write_records<W: Write>(
    dom: &Domain,
    records: &[TrainingRecord],
    mut w: W,
) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_json(dom))?;
    }
    Ok(())
}

pub fn read_records<R: BufRead>(dom: &Domain, r: R) -> Result<Vec<TrainingRecord>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let j: Json = serde_json::from_str(&line).map_err(|e| RecordError::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(TrainingRecord::from_json(dom, &j, i + 1)?);
    }
    Ok(out)
}

/// Planner decisions of a finished run.
pub fn records_from_run(report: &RunReport) -> Vec<TrainingRecord> {
    report
        .decisions
        .iter()
        .map(|d| TrainingRecord {
            state: d.state.clone(),
            task: d.task.clone(),
            method: d.method.method,
            success: d.success,
            utility: d.q,
        })
        .collect()
}

/// Acts on each problem with the planner and collects its decisions.
///
/// Single-candidate decisions are planned too so that every record carries a
/// utility estimate.
pub fn collect_records(
    dom: &Domain,
    problems: &[Problem],
    planner: &PlannerConfig,
    heuristic: &dyn Heuristic,
    seed: u64,
) -> Result<Vec<TrainingRecord>, EngineError> {
    let cfg = PlannerConfig {
        plan_singletons: true,
        ..planner.clone()
    };
    let engine = EngineConfig {
        record_decisions: true,
        ..EngineConfig::default()
    };
    let mut out = Vec::new();
    for (i, p) in problems.iter().enumerate() {
        let selector = Selector::Planner {
            cfg: &cfg,
            heuristic,
        };
        let report = rae_run(dom, p, selector, &engine, seed.wrapping_add(i as u64))?;
        out.extend(records_from_run(&report));
    }
    Ok(out)
}

/// `(encode_lm(s, τ), m)` examples.
pub fn lm_examples(
    dom: &Domain,
    records: &[TrainingRecord],
    strategy: Strategy,
) -> Result<Vec<Example>, EncodeError> {
    records
        .iter()
        .filter(|r| strategy == Strategy::All || r.success == Some(true))
        .map(|r| Ok((encode_lm(dom, &r.state, &r.task)?.hot, r.method.index())))
        .collect()
}

/// Utilities of the records that carry one.
pub fn utilities(records: &[TrainingRecord]) -> Vec<f64> {
    records.iter().filter_map(|r| r.utility).collect()
}

/// `(encode_lh(s, τ, m), interval(u))` examples.
pub fn lh_examples(
    dom: &Domain,
    records: &[TrainingRecord],
    map: &IntervalMap,
) -> Result<Vec<Example>, EncodeError> {
    records
        .iter()
        .filter_map(|r| r.utility.map(|u| (r, u)))
        .map(|(r, u)| {
            Ok((
                encode_lh(dom, &r.state, &r.task, r.method)?.hot,
                map.interval(u),
            ))
        })
        .collect()
}

pub fn input_widths(dom: &Domain) -> (usize, usize) {
    let l = Layout::of(dom);
    (l.lm_width(), l.lh_width())
}
