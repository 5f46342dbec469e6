//! The acting loop: an agenda of refinement stacks progressed round-robin,
//! with pluggable method selection and retry on failure.

mod trace;

use std::time::Duration;

use thiserror::Error;

pub use trace::TraceEvent;

use crate::interp::{self, Instr, InterpError};
use crate::model::{
    applicable, Domain, Frame, MethodId, MethodInstance, RefinementStack, State, Task,
};
use crate::planner::{select_method, Heuristic, PlanError, PlannerConfig};
use crate::sim::{ActionHandle, Environment, ExecStatus, Mutation, Problem, SimError, SimRng};

/// Learned context-to-template mapping.
pub trait MethodPolicy {
    fn choose_template(&self, dom: &Domain, s: &State, task: &Task) -> Option<MethodId>;
}

/// How the engine picks a method instance for an unrefined frame.
#[derive(Clone, Copy)]
pub enum Selector<'a> {
    /// First applicable instance not yet tried.
    Reactive,
    /// Template from the policy, instance drawn uniformly among that
    /// template's untried applicable instances; reactive order if none.
    Policy(&'a dyn MethodPolicy),
    Planner {
        cfg: &'a PlannerConfig,
        heuristic: &'a dyn Heuristic,
    },
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("interpreter: {0}")]
    Interp(#[from] InterpError),
    #[error("environment: {0}")]
    Sim(#[from] SimError),
    #[error("planner: {0}")]
    Plan(PlanError),
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Safety bound; stacks still pending at this tick are aborted as failures.
    pub max_ticks: u64,
    pub trace: bool,
    pub record_decisions: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_ticks: 20_000,
            trace: false,
            record_decisions: false,
        }
    }
}

/// A method choice made while acting.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionRecord {
    pub state: State,
    pub task: Task,
    pub method: MethodInstance,
    /// Root `Q` of the chosen method when a planner made the choice.
    pub q: Option<f64>,
    /// Whether the method's body completed; `None` if the run ended first.
    pub success: Option<bool>,
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskReport {
    pub root: usize,
    pub task: Task,
    pub event: bool,
    pub arrival: u64,
    pub finished: u64,
    pub success: bool,
    pub cost: f64,
    /// `1/cost` on success, `0` on failure.
    pub efficiency: f64,
    pub planning_time: Duration,
    pub rollouts: u64,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub tasks: Vec<TaskReport>,
    pub trace: Vec<TraceEvent>,
    pub decisions: Vec<DecisionRecord>,
    pub mutations: Vec<Mutation>,
    pub ticks: u64,
    pub env_draws: u64,
    pub final_state: State,
}

#[derive(Clone, Debug, Default)]
struct FrameInfo {
    tried: Vec<MethodInstance>,
    record: Option<usize>,
}

struct Entry {
    root: usize,
    task: Task,
    event: bool,
    arrival: u64,
    stack: RefinementStack,
    info: Vec<FrameInfo>,
    running: Option<ActionHandle>,
    cost: f64,
    planning: Duration,
    rollouts: u64,
    verdict: Option<bool>,
}

struct Actor<'d, 'a> {
    dom: &'d Domain,
    env: Environment<'d>,
    selector: Selector<'a>,
    cfg: &'a EngineConfig,
    planner_rng: SimRng,
    policy_rng: SimRng,
    trace: Vec<TraceEvent>,
    decisions: Vec<DecisionRecord>,
}

/// Runs every root task of `problem` to a verdict.
///
/// Randomness comes from three streams derived from `seed`: `env` for
/// action outcomes in the world, `planner` for rollouts and `policy` for the
/// learned selector, so planning never perturbs what happens when acting.
pub fn rae_run(
    dom: &Domain,
    problem: &Problem,
    selector: Selector<'_>,
    cfg: &EngineConfig,
    seed: u64,
) -> Result<RunReport, EngineError> {
    let root = SimRng::new(seed);
    let env = Environment::new(
        dom,
        problem.initial.clone(),
        problem.events.clone(),
        root.stream("env"),
    );
    let actor = Actor {
        dom,
        env,
        selector,
        cfg,
        planner_rng: root.stream("planner"),
        policy_rng: root.stream("policy"),
        trace: Vec::new(),
        decisions: Vec::new(),
    };
    actor.run(problem)
}

impl Actor<'_, '_> {
    fn tick(&self) -> u64 {
        self.env.clock().tick()
    }

    fn log(&mut self, ev: impl FnOnce(u64) -> TraceEvent) {
        if self.cfg.trace {
            let t = self.tick();
            self.trace.push(ev(t));
        }
    }

    fn run(mut self, problem: &Problem) -> Result<RunReport, EngineError> {
        let mut agenda: Vec<Entry> = Vec::new();
        let mut reports: Vec<TaskReport> = Vec::new();
        let mut arrivals = problem.arrivals.iter().peekable();
        let mut n_roots = 0usize;

        loop {
            let now = self.tick();
            let mut incoming: Vec<(Task, bool)> = Vec::new();
            while let Some(a) = arrivals.next_if(|a| a.tick <= now) {
                incoming.push((a.task.clone(), false));
            }
            let seen = self.env.mutations().len();
            let events = self.env.pending_events();
            if self.cfg.trace {
                for m in &self.env.mutations()[seen..] {
                    self.trace.push(TraceEvent::Exogenous {
                        tick: now,
                        var: self.dom.var_name(m.slot),
                        value: self.dom.display(m.new).to_string(),
                    });
                }
            }
            incoming.extend(events.into_iter().map(|t| (t, true)));
            incoming.extend(self.env.take_emitted().into_iter().map(|t| (t, true)));
            for (task, event) in incoming {
                let root = n_roots;
                n_roots += 1;
                let name = self.dom.fmt_task(&task);
                self.log(|tick| TraceEvent::Arrive {
                    tick,
                    root,
                    task: name,
                    event,
                });
                let mut stack = RefinementStack::new();
                stack.push(Frame::unrefined(task.clone()));
                agenda.push(Entry {
                    root,
                    task,
                    event,
                    arrival: now,
                    stack,
                    info: vec![FrameInfo::default()],
                    running: None,
                    cost: 0.0,
                    planning: Duration::ZERO,
                    rollouts: 0,
                    verdict: None,
                });
            }

            if agenda.is_empty() && arrivals.peek().is_none() && !self.env.has_scheduled_events() {
                break;
            }
            if now >= self.cfg.max_ticks {
                for e in &mut agenda {
                    let root = e.root;
                    self.log(|tick| TraceEvent::Abort { tick, root });
                    e.verdict = Some(false);
                }
                self.collect(&mut agenda, &mut reports);
                break;
            }

            for e in agenda.iter_mut() {
                self.progress(e)?;
            }
            self.collect(&mut agenda, &mut reports);
            self.env.tick();
        }

        reports.sort_by_key(|r| r.root);
        Ok(RunReport {
            tasks: reports,
            trace: self.trace,
            decisions: self.decisions,
            mutations: self.env.mutations().to_vec(),
            ticks: self.env.clock().tick(),
            env_draws: self.env.rng().draws(),
            final_state: self.env.state().clone(),
        })
    }

    fn collect(&mut self, agenda: &mut Vec<Entry>, reports: &mut Vec<TaskReport>) {
        let now = self.tick();
        agenda.retain(|e| {
            let Some(success) = e.verdict else {
                return true;
            };
            reports.push(TaskReport {
                root: e.root,
                task: e.task.clone(),
                event: e.event,
                arrival: e.arrival,
                finished: now,
                success,
                cost: e.cost,
                efficiency: if success { 1.0 / e.cost } else { 0.0 },
                planning_time: e.planning,
                rollouts: e.rollouts,
            });
            false
        });
    }

    /// One unit of progress on a stack.
    fn progress(&mut self, e: &mut Entry) -> Result<(), EngineError> {
        if let Some(h) = e.running.clone() {
            return self.poll(e, &h);
        }
        let dom = self.dom;
        let top = e.stack.top().map_err(InterpError::from)?;
        if top.method.is_none() {
            return self.select(e);
        }
        match interp::current_instr(dom, &e.stack)? {
            Some(Instr::Action(a, args)) => {
                let ga = interp::ground_action(dom, &e.stack, self.env.state(), *a, args)?;
                let (root, name) = (e.root, dom.fmt_action(&ga));
                self.log(|tick| TraceEvent::Start {
                    tick,
                    root,
                    action: name,
                });
                let h = self.env.start(ga);
                e.running = Some(h.clone());
                self.poll(e, &h)
            }
            Some(Instr::Subtask(t, args)) => {
                let task = interp::ground_task(dom, &e.stack, self.env.state(), *t, args)?;
                let (root, name) = (e.root, dom.fmt_task(&task));
                self.log(|tick| TraceEvent::Push {
                    tick,
                    root,
                    task: name,
                });
                e.stack.push(Frame::unrefined(task));
                e.info.push(FrameInfo::default());
                Ok(())
            }
            Some(Instr::Assign(slot, expr)) => {
                let slot = *slot;
                if self.cfg.trace {
                    let m = top
                        .method
                        .as_ref()
                        .map(|m| m.method)
                        .ok_or(InterpError::NoMethod)?;
                    let p = top.step.as_ref().ok_or(InterpError::NoMethod)?;
                    let v = p
                        .eval(dom, self.env.state(), expr)
                        .map_err(InterpError::from)?;
                    let (root, var, value) = (
                        e.root,
                        dom.method(m).slot_names[slot].clone(),
                        dom.display(v).to_string(),
                    );
                    self.log(|tick| TraceEvent::Assign {
                        tick,
                        root,
                        var,
                        value,
                    });
                }
                interp::assign(dom, &mut e.stack, self.env.state(), slot, expr)?;
                self.after_advance(e);
                Ok(())
            }
            Some(Instr::Fail) => {
                let root = e.root;
                self.log(|tick| TraceEvent::FailStep { tick, root });
                self.retry(e);
                Ok(())
            }
            _ => Err(InterpError::Malformed.into()),
        }
    }

    fn poll(&mut self, e: &mut Entry, h: &ActionHandle) -> Result<(), EngineError> {
        let status = self.env.execute(h)?;
        let (root, name) = (e.root, self.dom.fmt_action(&h.action));
        match status {
            ExecStatus::Running => Ok(()),
            ExecStatus::Done { cost, .. } => {
                e.cost += cost;
                e.running = None;
                self.log(|tick| TraceEvent::Done {
                    tick,
                    root,
                    action: name,
                    cost,
                });
                interp::advance(self.dom, &mut e.stack, self.env.state())?;
                self.after_advance(e);
                Ok(())
            }
            ExecStatus::Failed { cost, .. } => {
                e.cost += cost;
                e.running = None;
                self.log(|tick| TraceEvent::ActionFailed {
                    tick,
                    root,
                    action: name,
                });
                self.retry(e);
                Ok(())
            }
        }
    }

    /// Credits frames popped by a successful step and settles the verdict.
    fn after_advance(&mut self, e: &mut Entry) {
        let n = e.stack.len();
        for info in e.info.drain(n..) {
            if let Some(r) = info.record {
                self.decisions[r].success = Some(true);
            }
        }
        if e.stack.is_empty() {
            e.verdict = Some(true);
            let (root, cost) = (e.root, e.cost);
            self.log(|tick| TraceEvent::Succeed { tick, root, cost });
        }
    }

    /// Marks the top frame's method tried and leaves the frame unrefined;
    /// the next progress step selects an alternative or fails the frame.
    fn retry(&mut self, e: &mut Entry) {
        let Ok(top) = e.stack.top_mut() else {
            return;
        };
        let Some(m) = top.method.take() else {
            return;
        };
        top.step = None;
        let info = e.info.last_mut().expect("frame info parallels the stack");
        if let Some(r) = info.record.take() {
            self.decisions[r].success = Some(false);
        }
        let (root, name) = (e.root, self.dom.fmt_method(&m));
        info.tried.push(m);
        self.log(|tick| TraceEvent::Retry {
            tick,
            root,
            method: name,
        });
    }

    fn select(&mut self, e: &mut Entry) -> Result<(), EngineError> {
        let dom = self.dom;
        let task = e.stack.top().map_err(InterpError::from)?.task.clone();
        let tried = &e.info.last().expect("frame info parallels the stack").tried;
        let s = self.env.state();
        let choice: Option<(MethodInstance, Option<f64>)> = match self.selector {
            Selector::Reactive => applicable(dom, s, &task)
                .into_iter()
                .find(|m| !tried.contains(m))
                .map(|m| (m, None)),
            Selector::Policy(p) => {
                let cands: Vec<MethodInstance> = applicable(dom, s, &task)
                    .into_iter()
                    .filter(|m| !tried.contains(m))
                    .collect();
                let predicted = p.choose_template(dom, s, &task);
                let of_template: Vec<&MethodInstance> = cands
                    .iter()
                    .filter(|m| Some(m.method) == predicted)
                    .collect();
                if of_template.is_empty() {
                    cands.first().cloned().map(|m| (m, None))
                } else {
                    let i = self.policy_rng.below(of_template.len());
                    Some((of_template[i].clone(), None))
                }
            }
            Selector::Planner { cfg, heuristic } => {
                let below =
                    RefinementStack::from_frames(e.stack.frames()[..e.stack.len() - 1].to_vec());
                match select_method(
                    dom,
                    s,
                    &task,
                    &below,
                    tried,
                    cfg,
                    heuristic,
                    &mut self.planner_rng,
                ) {
                    Ok(sel) => {
                        e.planning += sel.elapsed;
                        e.rollouts += sel.rollouts;
                        let q = sel.q_selected();
                        Some((sel.method, Some(q)))
                    }
                    Err(PlanError::NoApplicable) => None,
                    Err(err) => return Err(EngineError::Plan(err)),
                }
            }
        };

        let root = e.root;
        match choice {
            Some((m, q)) => {
                if self.cfg.record_decisions {
                    self.decisions.push(DecisionRecord {
                        state: self.env.state().clone(),
                        task: task.clone(),
                        method: m.clone(),
                        q,
                        success: None,
                        root,
                    });
                    e.info.last_mut().expect("frame info").record = Some(self.decisions.len() - 1);
                }
                let (tname, mname) = (dom.fmt_task(&task), dom.fmt_method(&m));
                self.log(|tick| TraceEvent::Select {
                    tick,
                    root,
                    task: tname,
                    method: mname,
                });
                interp::begin(dom, &mut e.stack, self.env.state(), m)?;
                self.after_advance(e);
            }
            None => {
                let tname = dom.fmt_task(&task);
                self.log(|tick| TraceEvent::NoMethod {
                    tick,
                    root,
                    task: tname,
                });
                e.stack.pop().map_err(InterpError::from)?;
                e.info.pop();
                if e.stack.is_empty() {
                    e.verdict = Some(false);
                    let cost = e.cost;
                    self.log(|tick| TraceEvent::Fail { tick, root, cost });
                } else {
                    self.retry(e);
                }
            }
        }
        Ok(())
    }
}
