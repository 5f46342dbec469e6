//! Method selection by Monte-Carlo rollouts over refinement trees.

mod config;
mod stats;
mod upom;

pub use config::{ConfigError, Exploration, PlannerConfig};
pub use stats::{q_update, ucb_choose, NodeStats, StatsTable};
pub use upom::{
    best_estimate, select_method, ConstantHeuristic, Heuristic, LogEntry, PlanError, Selection,
    Upom,
};
