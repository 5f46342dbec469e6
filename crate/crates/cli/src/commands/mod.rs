pub mod gen;
pub mod report;
pub mod run;
pub mod train;
pub mod validate;

use std::path::Path;
use std::time::Duration;

use rae_core::domains;
use rae_core::model::Domain;
use rae_core::planner::PlannerConfig;

use crate::cli::PlannerArgs;
use crate::error::{CliError, CliResult};

pub fn build_domain(name: &str) -> CliResult<Domain> {
    domains::build(name).map_err(|e| CliError::usage(e.to_string()))
}

pub fn planner_config(a: &PlannerArgs) -> CliResult<PlannerConfig> {
    let time_budget = match a.time_budget {
        None => None,
        Some(s) if s > 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
        Some(s) => {
            return Err(CliError::usage(format!(
                "--time-budget must be positive, got {s}"
            )))
        }
    };
    let cfg = PlannerConfig {
        n_ro: a.nro,
        d_max: a.dmax.0,
        deepening: a.deepening,
        time_budget,
        exploration: a.exploration,
        ..PlannerConfig::default()
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(cfg)
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::internal(anyhow::anyhow!("cannot create {}: {e}", dir.display())))
}
