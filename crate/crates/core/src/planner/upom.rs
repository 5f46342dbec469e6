use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use thiserror::Error;

use super::config::{ConfigError, PlannerConfig};
use super::stats::{q_update, ucb_choose, NodeStats, StatsTable};
use crate::interp::{self, Instr, InterpError};
use crate::model::{
    applicable, digest, Digest, Domain, Frame, MethodId, MethodInstance, RefinementStack, State,
    Task,
};
use crate::sim::{sample, Sampled, SimError, SimRng};
use crate::utility::Utility;

/// Estimate of the utility still to come for `task` refined by `method`.
pub trait Heuristic {
    fn estimate(&self, dom: &Domain, s: &State, task: &Task, method: MethodId) -> Utility;
}

/// Same value everywhere; the default stands for one unit of remaining cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantHeuristic(pub Utility);

impl Default for ConstantHeuristic {
    fn default() -> Self {
        ConstantHeuristic(Utility::Finite(1.0))
    }
}

impl Heuristic for ConstantHeuristic {
    fn estimate(&self, _: &Domain, _: &State, _: &Task, _: MethodId) -> Utility {
        self.0
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("no applicable method instance")]
    NoApplicable,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// One line of the rollout trace.
#[derive(Clone, Debug, PartialEq)]
pub enum LogEntry {
    /// A method was chosen at `node` and later credited with `lambda`.
    Decision {
        rollout: u64,
        depth: Option<u32>,
        node: Digest,
        chosen: MethodInstance,
        lambda: f64,
    },
    /// An action outcome drawn during a rollout; `None` is a failed
    /// precondition.
    Sample {
        rollout: u64,
        depth: Option<u32>,
        action: String,
        outcome: Option<usize>,
        failed: bool,
    },
}

fn fmt_depth(d: Option<u32>) -> String {
    d.map_or_else(|| "inf".to_string(), |d| d.to_string())
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogEntry::Decision {
                rollout,
                depth,
                node,
                chosen,
                lambda,
            } => write!(
                f,
                "rollout={rollout} depth={} node={:016x} chosen={}{:?} lambda={lambda}",
                fmt_depth(*depth),
                node.short(),
                chosen.method.index(),
                chosen.binding
            ),
            LogEntry::Sample {
                rollout,
                depth,
                action,
                outcome,
                failed,
            } => write!(
                f,
                "rollout={rollout} depth={} action={action} outcome={} failed={failed}",
                fmt_depth(*depth),
                outcome.map_or_else(|| "pre".to_string(), |o| o.to_string())
            ),
        }
    }
}

/// Outcome of one `select_method` call.
#[derive(Clone, Debug)]
pub struct Selection {
    pub method: MethodInstance,
    /// Root candidates with their final `Q` and `N`.
    pub root: NodeStats,
    pub rollouts: u64,
    pub elapsed: Duration,
    pub stats: StatsTable,
    pub log: Vec<LogEntry>,
}

impl Selection {
    /// Root `Q` of the selected method (0 when it was never rolled out).
    pub fn q_selected(&self) -> f64 {
        self.root
            .index_of(&self.method)
            .map_or(0.0, |i| self.root.q[i])
    }
}

enum Step {
    Decision(usize, usize),
    Action(Utility),
    Logged(usize),
}

/// Search state for one `select_method` call.
pub struct Upom<'a> {
    dom: &'a Domain,
    cfg: &'a PlannerConfig,
    h: &'a dyn Heuristic,
    rng: &'a mut SimRng,
    root_key: Digest,
    root_candidates: Vec<MethodInstance>,
    pub stats: StatsTable,
    pub log: Vec<LogEntry>,
    pub rollouts: u64,
    path: Vec<Step>,
}

impl<'a> Upom<'a> {
    /// `root` must have the unrefined task frame on top. `candidates` seeds the
    /// root node instead of `Applicable`, so callers can exclude instances.
    pub fn new(
        dom: &'a Domain,
        cfg: &'a PlannerConfig,
        h: &'a dyn Heuristic,
        rng: &'a mut SimRng,
        s: &State,
        root: &RefinementStack,
        candidates: Vec<MethodInstance>,
    ) -> Self {
        Upom {
            dom,
            cfg,
            h,
            rng,
            root_key: digest(s, root),
            root_candidates: candidates,
            stats: StatsTable::new(),
            log: Vec::new(),
            rollouts: 0,
            path: Vec::new(),
        }
    }

    /// Heuristic value at a rollout cutoff.
    fn cutoff(&self, s: &State, stack: &RefinementStack) -> Result<Utility, PlanError> {
        let top = stack.top().map_err(InterpError::from)?;
        Ok(match &top.method {
            Some(m) => self.h.estimate(self.dom, s, &top.task, m.method),
            None => {
                best_estimate(
                    self.dom,
                    self.h,
                    s,
                    &top.task,
                    &applicable(self.dom, s, &top.task),
                )
                .1
            }
        })
    }

    /// One rollout from `(s, stack)` with length budget `d`; returns its
    /// utility and credits every decision on the way.
    pub fn rollout(
        &mut self,
        s: &State,
        stack: &RefinementStack,
        d: Option<u32>,
    ) -> Result<Utility, PlanError> {
        let dom = self.dom;
        let mut s = s.clone();
        let mut stack = stack.clone();
        let mut d = d;
        let mut steps = 0usize;
        self.path.clear();
        let rollout = self.rollouts;

        let terminal = loop {
            steps += 1;
            if steps > self.cfg.max_rollout_steps {
                log::debug!(
                    "rollout exceeded {} steps; counted as failure",
                    self.cfg.max_rollout_steps
                );
                break Utility::FAILURE;
            }
            if stack.is_empty() {
                break Utility::SUCCESS;
            }
            if d == Some(0) {
                break self.cutoff(&s, &stack)?;
            }
            let top = stack.top().map_err(InterpError::from)?;
            let subtask = match &top.method {
                None => None,
                Some(_) => match interp::current_instr(dom, &stack)? {
                    Some(Instr::Subtask(t, args)) => {
                        Some(interp::ground_task(dom, &stack, &s, *t, args)?)
                    }
                    Some(Instr::Action(a, args)) => {
                        let ga = interp::ground_action(dom, &stack, &s, *a, args)?;
                        let drawn = sample(dom, &s, &ga, self.rng)?;
                        if self.cfg.record_log {
                            let (outcome, failed) = match &drawn {
                                Sampled::Success { outcome, .. } => (Some(*outcome), false),
                                Sampled::Failed { outcome, .. } => (*outcome, true),
                            };
                            self.log.push(LogEntry::Sample {
                                rollout,
                                depth: d,
                                action: dom.fmt_action(&ga),
                                outcome,
                                failed,
                            });
                        }
                        match drawn {
                            Sampled::Failed { .. } => break Utility::FAILURE,
                            Sampled::Success { state, cost, .. } => {
                                self.path.push(Step::Action(Utility::from_total_cost(cost)));
                                s = state;
                                interp::advance(dom, &mut stack, &s)?;
                                d = d.map(|d| d - 1);
                                continue;
                            }
                        }
                    }
                    Some(Instr::Assign(slot, e)) => {
                        interp::assign(dom, &mut stack, &s, *slot, e)?;
                        continue;
                    }
                    Some(Instr::Fail) => break Utility::FAILURE,
                    Some(_) | None => return Err(InterpError::Malformed.into()),
                },
            };

            // decision node: the unrefined root frame, or a subtask step
            let key = digest(&s, &stack);
            let node = match self.stats.lookup(&key) {
                Some(i) => i,
                None => {
                    let cands = if subtask.is_none() && key == self.root_key {
                        self.root_candidates.clone()
                    } else {
                        let t = subtask.as_ref().unwrap_or(&top.task);
                        applicable(dom, &s, t)
                    };
                    if cands.is_empty() {
                        break Utility::FAILURE;
                    }
                    self.stats.insert(key.clone(), NodeStats::new(cands))
                }
            };
            let st = self.stats.node(node);
            let untried = st.untried();
            let idx = match untried.choose(self.rng) {
                Some(&i) => i,
                None => ucb_choose(st, self.cfg.exploration.at(st.max_q())),
            };
            let chosen = st.candidates[idx].clone();
            if self.cfg.record_log {
                self.path.push(Step::Logged(self.log.len()));
                self.log.push(LogEntry::Decision {
                    rollout,
                    depth: d,
                    node: key,
                    chosen: chosen.clone(),
                    lambda: f64::NAN,
                });
            }
            self.path.push(Step::Decision(node, idx));
            match subtask {
                None => interp::begin(dom, &mut stack, &s, chosen)?,
                Some(t) => interp::push_refined(dom, &mut stack, &s, t, chosen)?,
            }
            d = d.map(|d| d - 1);
        };

        let mut lambda = terminal;
        let mut pending_log = None;
        for step in self.path.drain(..).rev() {
            match step {
                Step::Action(u) => lambda = u.compose(lambda),
                Step::Decision(node, idx) => {
                    let credit = lambda.clamped(self.cfg.infinity_cap);
                    q_update(self.stats.node_mut(node), idx, credit);
                    pending_log = Some(credit);
                }
                Step::Logged(i) => {
                    if let (Some(credit), LogEntry::Decision { lambda, .. }) =
                        (pending_log.take(), &mut self.log[i])
                    {
                        *lambda = credit;
                    }
                }
            }
        }
        self.rollouts += 1;
        Ok(lambda)
    }
}

/// First candidate maximizing `h`, with its value; `U(Failure)` when empty.
pub fn best_estimate(
    dom: &Domain,
    h: &dyn Heuristic,
    s: &State,
    task: &Task,
    candidates: &[MethodInstance],
) -> (Option<usize>, Utility) {
    let mut best: Option<(usize, Utility)> = None;
    for (i, m) in candidates.iter().enumerate() {
        let v = h.estimate(dom, s, task, m.method);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    match best {
        Some((i, v)) => (Some(i), v),
        None => (None, Utility::FAILURE),
    }
}

/// Chooses a method instance for `task` in state `s` on top of `stack`.
///
/// The initial choice maximizes the heuristic; rollouts then refine it and
/// the result is the root candidate with the highest `Q`. Instances listed in
/// `exclude` are never chosen.
#[allow(clippy::too_many_arguments)]
pub fn select_method(
    dom: &Domain,
    s: &State,
    task: &Task,
    stack: &RefinementStack,
    exclude: &[MethodInstance],
    cfg: &PlannerConfig,
    h: &dyn Heuristic,
    rng: &mut SimRng,
) -> Result<Selection, PlanError> {
    cfg.validate()?;
    let start = Instant::now();
    let candidates: Vec<MethodInstance> = applicable(dom, s, task)
        .into_iter()
        .filter(|m| !exclude.contains(m))
        .collect();
    let (first, _) = best_estimate(dom, h, s, task, &candidates);
    let Some(first) = first else {
        return Err(PlanError::NoApplicable);
    };
    let mut chosen = first;

    let mut root = stack.clone();
    root.push(Frame::unrefined(task.clone()));
    let mut upom = Upom::new(dom, cfg, h, rng, s, &root, candidates.clone());

    let out_of_time = |start: Instant| cfg.time_budget.is_some_and(|b| start.elapsed() >= b);
    let worth_planning = candidates.len() > 1 || cfg.plan_singletons;
    if worth_planning && !out_of_time(start) {
        let levels: Vec<Option<u32>> = match (cfg.deepening, cfg.d_max) {
            (false, d) => vec![d],
            (true, Some(dm)) => (1..=dm).map(Some).collect(),
            (true, None) => Vec::new(),
        };
        let mut level = 0usize;
        'deepen: loop {
            let d = if cfg.deepening && cfg.d_max.is_none() {
                Some(level as u32 + 1)
            } else if level < levels.len() {
                levels[level]
            } else {
                break;
            };
            for _ in 0..cfg.n_ro {
                if out_of_time(start) {
                    break 'deepen;
                }
                upom.rollout(s, &root, d)?;
            }
            if let Some(best) = upom.stats.get(&upom.root_key).and_then(NodeStats::best) {
                chosen = best;
            }
            level += 1;
        }
        // an interrupted level still leaves usable statistics
        if let Some(best) = upom.stats.get(&upom.root_key).and_then(NodeStats::best) {
            chosen = best;
        }
    }

    let root_stats = upom
        .stats
        .get(&upom.root_key)
        .cloned()
        .unwrap_or_else(|| NodeStats::new(candidates.clone()));
    let method = root_stats.candidates[chosen].clone();
    Ok(Selection {
        method,
        root: root_stats,
        rollouts: upom.rollouts,
        elapsed: start.elapsed(),
        stats: upom.stats,
        log: upom.log,
    })
}
