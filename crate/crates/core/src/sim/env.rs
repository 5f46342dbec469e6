use std::collections::VecDeque;

use super::rng::SimRng;
use super::sample::{sample, Sampled, SimError};
use crate::interp::eval::eval;
use crate::model::{Domain, GroundAction, State, Task, Value};

/// Discrete acting clock, advanced once per agenda iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnvClock {
    tick: u64,
}

impl EnvClock {
    pub fn new() -> Self {
        EnvClock { tick: 0 }
    }

    pub fn at(tick: u64) -> Self {
        EnvClock { tick }
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn advance(&mut self) {
        self.tick += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExoEffect {
    /// An event task that enters the agenda as a new root.
    Task(Task),
    /// Direct assignment of ground variables.
    Mutate(Vec<(usize, Value)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExoEvent {
    pub tick: u64,
    pub effect: ExoEffect,
}

/// Removes and returns the events due at or before the clock's tick, in
/// schedule order.
pub fn pending_events(clock: &EnvClock, schedule: &mut VecDeque<ExoEvent>) -> Vec<ExoEvent> {
    let mut out = Vec::new();
    while schedule.front().is_some_and(|e| e.tick <= clock.tick()) {
        out.extend(schedule.pop_front());
    }
    out
}

/// A triggered action in the acting environment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionHandle {
    pub action: GroundAction,
    pub started: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExecStatus {
    Running,
    Done { cost: f64, outcome: usize },
    Failed { cost: f64, outcome: Option<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cause {
    Action(GroundAction),
    Event,
}

/// One write to the acting state.
#[derive(Clone, Debug, PartialEq)]
pub struct Mutation {
    pub tick: u64,
    pub slot: usize,
    pub old: Value,
    pub new: Value,
    pub cause: Cause,
}

/// Ground-truth world for acting. Owns the true state, the clock, the
/// exogenous schedule and a private RNG stream the planner never touches.
#[derive(Debug)]
pub struct Environment<'d> {
    dom: &'d Domain,
    state: State,
    clock: EnvClock,
    rng: SimRng,
    schedule: VecDeque<ExoEvent>,
    emitted: Vec<Task>,
    log: Vec<Mutation>,
}

impl<'d> Environment<'d> {
    /// `events` must be sorted by tick.
    pub fn new(dom: &'d Domain, state: State, events: Vec<ExoEvent>, rng: SimRng) -> Self {
        debug_assert!(events.windows(2).all(|w| w[0].tick <= w[1].tick));
        Environment {
            dom,
            state,
            clock: EnvClock::new(),
            rng,
            schedule: events.into(),
            emitted: Vec::new(),
            log: Vec::new(),
        }
    }

    pub fn domain(&self) -> &'d Domain {
        self.dom
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn clock(&self) -> EnvClock {
        self.clock
    }

    pub fn tick(&mut self) {
        self.clock.advance();
    }

    pub fn rng(&self) -> &SimRng {
        &self.rng
    }

    pub fn mutations(&self) -> &[Mutation] {
        &self.log
    }

    pub fn has_scheduled_events(&self) -> bool {
        !self.schedule.is_empty()
    }

    pub fn start(&self, action: GroundAction) -> ActionHandle {
        ActionHandle {
            action,
            started: self.clock.tick(),
        }
    }

    /// Polls a triggered action. It completes on the tick where its duration
    /// has elapsed, counting the start tick; the outcome is then drawn from
    /// the environment stream against the current true state.
    pub fn execute(&mut self, h: &ActionHandle) -> Result<ExecStatus, SimError> {
        let dur = self.dom.action(h.action.action).duration.max(1) as u64;
        if self.clock.tick() + 1 < h.started + dur {
            return Ok(ExecStatus::Running);
        }
        match sample(self.dom, &self.state, &h.action, &mut self.rng)? {
            Sampled::Failed { cost, outcome } => Ok(ExecStatus::Failed { cost, outcome }),
            Sampled::Success {
                state,
                cost,
                outcome,
            } => {
                self.raise_emits(&h.action)?;
                self.commit(state, Cause::Action(h.action.clone()));
                Ok(ExecStatus::Done { cost, outcome })
            }
        }
    }

    fn raise_emits(&mut self, a: &GroundAction) -> Result<(), SimError> {
        let spec = self.dom.action(a.action);
        let locals: Vec<Option<Value>> = a.args.iter().map(|v| Some(*v)).collect();
        for (task, args) in &spec.emits {
            let args = args
                .iter()
                .map(|e| eval(self.dom, &self.state, &locals, e))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|source| SimError::Eval {
                    action: self.dom.fmt_action(a),
                    source,
                })?;
            self.emitted.push(Task::new(*task, args));
        }
        Ok(())
    }

    fn commit(&mut self, next: State, cause: Cause) {
        for (slot, (old, new)) in self.state.values().iter().zip(next.values()).enumerate() {
            if old != new {
                self.log.push(Mutation {
                    tick: self.clock.tick(),
                    slot,
                    old: *old,
                    new: *new,
                    cause: cause.clone(),
                });
            }
        }
        self.state = next;
    }

    /// Consumes due events. Mutations are applied immediately; event tasks
    /// are returned for the caller to put on the agenda.
    pub fn pending_events(&mut self) -> Vec<Task> {
        let mut tasks = Vec::new();
        for ev in pending_events(&self.clock, &mut self.schedule) {
            match ev.effect {
                ExoEffect::Task(t) => tasks.push(t),
                ExoEffect::Mutate(writes) => {
                    let mut next = self.state.clone();
                    for (slot, v) in writes {
                        if let Err(e) = next.set(self.dom, slot, v) {
                            log::warn!("ignoring exogenous write: {e}");
                        }
                    }
                    self.commit(next, Cause::Event);
                }
            }
        }
        tasks
    }

    /// Event tasks raised by completed actions since the last call.
    pub fn take_emitted(&mut self) -> Vec<Task> {
        std::mem::take(&mut self.emitted)
    }
}
