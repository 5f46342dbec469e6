use std::fmt::Write;

use rae_core::domains::BENCHMARKS;
use rae_core::learn::ModelFile;
use rae_core::model::Domain;
use rae_core::sim::Problem;

use super::{build_domain, read_text};
use crate::cli::ValidateArgs;
use crate::error::{CliError, CliResult};

fn mark(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "-"
    }
}

/// One row per domain: sizes and declared features.
pub fn table(doms: &[Domain]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>3} {:>3} {:>3}  {:<5} {:<5} {:<7} {:<7} {:<8}",
        "domain", "|T|", "|M|", "|A|", "exo", "dead", "sensing", "collab", "parallel"
    );
    for d in doms {
        let f = d.features();
        let _ = writeln!(
            out,
            "{:<12} {:>3} {:>3} {:>3}  {:<5} {:<5} {:<7} {:<7} {:<8}",
            d.name(),
            d.tasks().len(),
            d.methods().len(),
            d.actions().len(),
            mark(f.exogenous_events),
            mark(f.dead_ends),
            mark(f.sensing),
            mark(f.collaboration),
            mark(f.parallel_tasks)
        );
    }
    out
}

pub fn execute(args: &ValidateArgs) -> CliResult<String> {
    let names: Vec<String> = if args.domain.is_empty() {
        BENCHMARKS.iter().map(|s| s.to_string()).collect()
    } else {
        args.domain.clone()
    };
    let doms = names
        .iter()
        .map(|n| build_domain(n))
        .collect::<CliResult<Vec<_>>>()?;
    let mut out = table(&doms);
    if !args.problem.is_empty() {
        if doms.len() != 1 {
            return Err(CliError::usage("--problem needs exactly one --domain"));
        }
        for path in &args.problem {
            let p = Problem::parse(&doms[0], &read_text(path)?)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            let _ = writeln!(
                out,
                "{}: ok ({} tasks, {} events)",
                path.display(),
                p.arrivals.len(),
                p.events.len()
            );
        }
    }
    for path in &args.model {
        let m = ModelFile::parse(&read_text(path)?)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let dom = build_domain(&m.domain)?;
        m.check(&dom)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let _ = writeln!(
            out,
            "{}: ok ({} model for {})",
            path.display(),
            m.kind.as_str(),
            m.domain
        );
    }
    Ok(out)
}
