use std::time::Duration;

use thiserror::Error;

/// Exploration constant of the UCB score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exploration {
    Fixed(f64),
    /// `√2 · max(1, max_m Q(m))`, recomputed per node; efficiencies are
    /// unbounded so a constant scale would not fit every domain.
    Auto,
}

impl Exploration {
    pub fn at(self, max_q: f64) -> f64 {
        match self {
            Exploration::Fixed(c) => c,
            Exploration::Auto => std::f64::consts::SQRT_2 * max_q.max(1.0),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid planner configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerConfig {
    /// Rollouts per depth level.
    pub n_ro: usize,
    /// Maximum rollout length; `None` is unbounded.
    pub d_max: Option<u32>,
    /// Progressive deepening `d = 1, 2, …, d_max`. When off, all rollouts run
    /// at `d_max` directly.
    pub deepening: bool,
    /// Wall-clock cap per call, checked between rollouts.
    pub time_budget: Option<Duration>,
    pub exploration: Exploration,
    /// Finite stand-in for an infinite rollout value in `Q` means.
    pub infinity_cap: f64,
    /// A rollout taking more steps than this counts as a failure.
    pub max_rollout_steps: usize,
    /// Plan even when only one candidate exists (to obtain its `Q`).
    pub plan_singletons: bool,
    pub record_log: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            n_ro: 1000,
            d_max: None,
            deepening: false,
            time_budget: None,
            exploration: Exploration::Auto,
            infinity_cap: 1e6,
            max_rollout_steps: 10_000,
            plan_singletons: false,
            record_log: false,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_ro == 0 {
            return Err(ConfigError("n_ro must be at least 1".into()));
        }
        if self.d_max == Some(0) {
            return Err(ConfigError("d_max must be at least 1".into()));
        }
        if self.deepening && self.d_max.is_none() && self.time_budget.is_none() {
            return Err(ConfigError(
                "progressive deepening with unbounded d_max needs a time budget".into(),
            ));
        }
        if let Exploration::Fixed(c) = self.exploration {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(ConfigError(format!(
                    "exploration constant {c} must be finite and non-negative"
                )));
            }
        }
        if !(self.infinity_cap > 0.0 && self.infinity_cap.is_finite()) {
            return Err(ConfigError(
                "infinity_cap must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}
