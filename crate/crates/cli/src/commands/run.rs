use std::path::PathBuf;

use rae_core::domains;
use rae_core::engine::{rae_run, EngineConfig, Selector};
use rae_core::learn::{LearnedHeuristic, LearnedPolicy, ModelFile};
use rae_core::model::Domain;
use rae_core::planner::{ConstantHeuristic, PlannerConfig};
use rae_core::sim::{derive_seed, Problem};

use super::{build_domain, create_dir, planner_config, read_text};
use crate::cli::{out_dir, Mode, RunArgs};
use crate::error::{CliError, CliResult};
use crate::rows::{read_rows, write_rows, write_text, Row};
use crate::summary::{render, summarize};

const DEFAULT_PROBLEMS: usize = 50;

pub struct RunOutput {
    /// Rows produced by this invocation.
    pub rows: Vec<Row>,
    pub csv: PathBuf,
    /// Summary of everything in the CSV file.
    pub summary: String,
}

/// Seed of run `run` of problem `problem_id`; shared by every mode so that
/// modes face the same environment randomness.
pub fn run_seed(seed: u64, problem_id: &str, run: u32) -> u64 {
    derive_seed(seed, &format!("{problem_id}/{run}"))
}

pub fn execute(args: &RunArgs) -> CliResult<RunOutput> {
    if args.runs == 0 {
        return Err(CliError::usage("--runs must be at least 1"));
    }
    if !args.problem_file.is_empty() && args.domain.len() != 1 {
        return Err(CliError::usage("--problem-file needs exactly one --domain"));
    }
    let count = args.suite.or(args.problems).unwrap_or(DEFAULT_PROBLEMS);
    if count == 0 {
        return Err(CliError::usage("--problems must be at least 1"));
    }
    let cfg = planner_config(&args.planner)?;
    let mut models = Vec::new();
    for path in &args.model {
        let m = ModelFile::parse(&read_text(path)?)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        models.push(m);
    }

    let mut rows = Vec::new();
    for name in &args.domain {
        let dom = build_domain(name)?;
        let problems = if args.problem_file.is_empty() {
            domains::gen_problems(&dom, count, args.seed)
        } else {
            let mut ps = Vec::new();
            for path in &args.problem_file {
                let p = Problem::parse(&dom, &read_text(path)?)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                ps.push(p);
            }
            ps
        };
        for &mode in &args.mode {
            log::info!(
                "{name}: mode {} on {} problems × {} runs",
                mode.name(),
                problems.len(),
                args.runs
            );
            rows.extend(run_mode(&dom, mode, &problems, &models, &cfg, args)?);
        }
    }

    let dir = out_dir(&args.out);
    create_dir(&dir)?;
    let csv = dir.join("runs.csv");
    write_rows(&csv, &rows, args.append)?;
    let all = if args.append {
        read_rows(&csv)?
    } else {
        rows.clone()
    };
    let summary = render(&summarize(&all));
    write_text(&dir.join("summary.txt"), &summary)?;
    Ok(RunOutput { rows, csv, summary })
}

fn find_model<'m>(
    models: &'m [ModelFile],
    dom: &Domain,
    mode: Mode,
) -> CliResult<Option<&'m ModelFile>> {
    let Some(kind) = mode.model_kind() else {
        return Ok(None);
    };
    let m = models
        .iter()
        .find(|m| m.domain == dom.name() && m.kind == kind)
        .ok_or_else(|| {
            CliError::usage(format!(
                "mode {} on {} needs --model with an {} model for that domain",
                mode.name(),
                dom.name(),
                kind.as_str()
            ))
        })?;
    m.check(dom).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(Some(m))
}

fn run_mode(
    dom: &Domain,
    mode: Mode,
    problems: &[Problem],
    models: &[ModelFile],
    cfg: &PlannerConfig,
    args: &RunArgs,
) -> CliResult<Vec<Row>> {
    let model = find_model(models, dom, mode)?.cloned();
    let usage_err = |e: rae_core::learn::ModelError| CliError::usage(e.to_string());
    let constant = ConstantHeuristic::default();
    let policy = match (mode, &model) {
        (Mode::Lm1 | Mode::Lm2, Some(m)) => {
            Some(LearnedPolicy::new(m.clone(), dom).map_err(usage_err)?)
        }
        _ => None,
    };
    let learned_h = match (mode, &model) {
        (Mode::UpomNnH, Some(m)) => Some(LearnedHeuristic::new(m.clone(), dom).map_err(usage_err)?),
        _ => None,
    };
    let selector = match mode {
        Mode::Reactive => Selector::Reactive,
        Mode::Upom => Selector::Planner {
            cfg,
            heuristic: &constant,
        },
        Mode::Lm1 | Mode::Lm2 => Selector::Policy(policy.as_ref().expect("policy loaded")),
        Mode::UpomNnH => Selector::Planner {
            cfg,
            heuristic: learned_h.as_ref().expect("heuristic loaded"),
        },
    };
    let ecfg = EngineConfig::default();
    let mut rows = Vec::new();
    for p in problems {
        for run in 0..args.runs {
            let seed = run_seed(args.seed, &p.id, run);
            let report = rae_run(dom, p, selector, &ecfg, seed)
                .map_err(|e| CliError::internal(anyhow::anyhow!("{} run {run}: {e}", p.id)))?;
            for t in &report.tasks {
                rows.push(Row {
                    domain: dom.name().to_string(),
                    problem_id: p.id.clone(),
                    run_id: run,
                    mode: mode.name().to_string(),
                    task_id: t.root,
                    success: t.success as u8,
                    cost: t.cost,
                    efficiency: t.efficiency,
                    planning_time_s: if args.timing {
                        t.planning_time.as_secs_f64()
                    } else {
                        0.0
                    },
                    rollouts: t.rollouts,
                    seed,
                });
            }
        }
    }
    Ok(rows)
}
