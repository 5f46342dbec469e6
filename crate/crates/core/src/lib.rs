//! Hierarchical acting with operational models.
//!
//! The [`engine`] runs root tasks by refining them with method bodies written
//! in a small instruction language ([`interp`]). Method choice is reactive,
//! planned by Monte-Carlo rollouts over refinement trees ([`planner`]), or
//! guided by networks trained on simulated experience ([`learn`]).

pub mod domains;
pub mod engine;
pub mod interp;
pub mod learn;
pub mod model;
pub mod planner;
pub mod sim;
pub mod utility;
