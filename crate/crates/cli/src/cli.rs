use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rae_core::learn::ModelKind;
use rae_core::planner::Exploration;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RAE_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "rae-out";

#[derive(Debug, Parser)]
#[command(name = "rae", version, about = "Refinement acting engine experiments")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Act on a problem suite in one or more modes and write per-task rows.
    Run(RunArgs),
    /// Collect planner decisions and train a method or utility model.
    Train(TrainArgs),
    /// Summarize run CSV files.
    Report(ReportArgs),
    /// Write a generated problem suite to disk.
    Gen(GenArgs),
    /// Check domains, problem files and model files.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Reactive,
    Upom,
    Lm1,
    Lm2,
    #[value(name = "upom+nnH")]
    UpomNnH,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Reactive => "reactive",
            Mode::Upom => "upom",
            Mode::Lm1 => "lm1",
            Mode::Lm2 => "lm2",
            Mode::UpomNnH => "upom+nnH",
        }
    }

    /// Kind of model file the mode needs, if any.
    pub fn model_kind(self) -> Option<ModelKind> {
        match self {
            Mode::Lm1 => Some(ModelKind::Lm1),
            Mode::Lm2 => Some(ModelKind::Lm2),
            Mode::UpomNnH => Some(ModelKind::Lh),
            Mode::Reactive | Mode::Upom => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Lm1,
    Lm2,
    Lh,
}

impl StrategyArg {
    pub fn kind(self) -> ModelKind {
        match self {
            StrategyArg::Lm1 => ModelKind::Lm1,
            StrategyArg::Lm2 => ModelKind::Lm2,
            StrategyArg::Lh => ModelKind::Lh,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyArg::Lm1 => "lm1",
            StrategyArg::Lm2 => "lm2",
            StrategyArg::Lh => "lh",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct PlannerArgs {
    /// Rollouts per planner call.
    #[arg(long, default_value_t = 1000)]
    pub nro: usize,
    /// Maximum rollout depth, or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_dmax)]
    pub dmax: Depth,
    /// UCB exploration constant, or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_exploration)]
    pub exploration: Exploration,
    /// Run rollouts at depths 1, 2, ..., dmax.
    #[arg(long)]
    pub deepening: bool,
    /// Wall-clock cap in seconds per planner call.
    #[arg(long, value_name = "SECONDS")]
    pub time_budget: Option<f64>,
}

/// `--dmax`: a positive depth or unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Depth(pub Option<u32>);

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Domains to run, repeated or comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub domain: Vec<String>,
    /// Modes to run, repeated or comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub mode: Vec<Mode>,
    /// Generated suite `sN` of N problems.
    #[arg(long, value_parser = parse_suite, conflicts_with_all = ["problems", "problem_file"])]
    pub suite: Option<usize>,
    /// Number of generated problems.
    #[arg(long, conflicts_with = "problem_file")]
    pub problems: Option<usize>,
    /// Problem files instead of a generated suite (single domain only).
    #[arg(long)]
    pub problem_file: Vec<PathBuf>,
    /// Runs per problem.
    #[arg(long, default_value_t = 20)]
    pub runs: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub planner: PlannerArgs,
    /// Model files for lm1, lm2 and upom+nnH, matched by domain and kind.
    #[arg(long)]
    pub model: Vec<PathBuf>,
    /// Output directory; defaults to $RAE_OUT_DIR, then ./rae-out.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append to an existing runs.csv instead of replacing it.
    #[arg(long)]
    pub append: bool,
    /// Record planner wall-clock time; without it the column is 0 so that
    /// output depends on the seed alone.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub strategy: StrategyArg,
    #[arg(long)]
    pub domain: String,
    /// Root tasks to act on when collecting decisions.
    #[arg(long, default_value_t = 100)]
    pub tasks: usize,
    /// Train on an existing JSONL record file instead of collecting.
    #[arg(long, conflicts_with = "tasks")]
    pub records: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub planner: PlannerArgs,
    /// Utility intervals (lh only).
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 64)]
    pub hidden: usize,
    #[arg(long, default_value_t = 0.05)]
    pub lr: f64,
    #[arg(long, default_value_t = 60)]
    pub epochs: usize,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    #[arg(long, default_value_t = 0.2)]
    pub val_fraction: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ReportArgs {
    /// Run CSV files.
    #[arg(required = true)]
    pub csv: Vec<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ValidateArgs {
    /// Domains to describe; all benchmarks by default.
    #[arg(long, value_delimiter = ',')]
    pub domain: Vec<String>,
    /// Problem files to check against the (single) domain.
    #[arg(long)]
    pub problem: Vec<PathBuf>,
    /// Model files to check against their domain.
    #[arg(long)]
    pub model: Vec<PathBuf>,
}

pub fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

pub fn parse_dmax(s: &str) -> Result<Depth, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Depth(None));
    }
    match s.parse::<u32>() {
        Ok(d) if d >= 1 => Ok(Depth(Some(d))),
        _ => Err(format!("expected a positive depth or `inf`, got `{s}`")),
    }
}

pub fn parse_exploration(s: &str) -> Result<Exploration, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Exploration::Auto);
    }
    match s.parse::<f64>() {
        Ok(c) if c >= 0.0 && c.is_finite() => Ok(Exploration::Fixed(c)),
        _ => Err(format!(
            "expected a non-negative constant or `auto`, got `{s}`"
        )),
    }
}

pub fn parse_suite(s: &str) -> Result<usize, String> {
    s.strip_prefix('s')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("expected a suite like `s50`, got `{s}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_parsers() {
        assert_eq!(parse_dmax("inf"), Ok(Depth(None)));
        assert_eq!(parse_dmax("5"), Ok(Depth(Some(5))));
        assert!(parse_dmax("0").is_err());
        assert_eq!(parse_suite("s50"), Ok(50));
        assert!(parse_suite("50").is_err());
        assert!(parse_suite("s0").is_err());
        assert_eq!(parse_exploration("2"), Ok(Exploration::Fixed(2.0)));
        assert!(parse_exploration("-1").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
