//! Nondeterministic environment: outcome sampling for planning, ground-truth
//! execution for acting, exogenous events and problem files.

mod env;
mod problem;
pub mod rng;
mod sample;

pub use env::{
    pending_events, ActionHandle, Cause, EnvClock, Environment, ExecStatus, ExoEffect, ExoEvent,
    Mutation,
};
pub use problem::{parse_task, task_to_json, Arrival, Problem, ProblemError, PROBLEM_FORMAT};
pub use rng::{derive_seed, SimRng};
pub use sample::{apply_effects, outcome_cost, sample, Sampled, SimError};
