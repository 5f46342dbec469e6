use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rae_core::domains;
use rae_core::learn::{
    collect_records, fit_model, read_records, write_records, ModelFile, TrainConfig,
};
use rae_core::model::Domain;
use rae_core::planner::ConstantHeuristic;
use rae_core::sim::Problem;

use super::{build_domain, create_dir, planner_config};
use crate::cli::{out_dir, TrainArgs};
use crate::error::{CliError, CliResult};
use crate::rows::write_text;

pub struct TrainOutput {
    pub model: PathBuf,
    pub curves: PathBuf,
    pub intervals: Option<PathBuf>,
    pub records: Option<PathBuf>,
    pub text: String,
}

/// Generated problems holding exactly `tasks` root tasks in total; the last
/// problem is cut short if needed.
pub fn problems_with_tasks(dom: &Domain, tasks: usize, seed: u64) -> Vec<Problem> {
    let mut out = Vec::new();
    let mut total = 0;
    let mut i = 0;
    while total < tasks {
        let mut p = domains::generate(dom, seed, i);
        p.arrivals.truncate(tasks - total);
        total += p.arrivals.len();
        out.push(p);
        i += 1;
    }
    out
}

pub fn execute(args: &TrainArgs) -> CliResult<TrainOutput> {
    let dom = build_domain(&args.domain)?;
    let tcfg = TrainConfig {
        hidden: args.hidden,
        lr: args.lr,
        epochs: args.epochs,
        batch: args.batch,
        val_fraction: args.val_fraction,
        seed: args.seed,
    };
    tcfg.validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    if args.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    let dir = out_dir(&args.out);
    create_dir(&dir)?;
    let stem = format!("{}-{}", dom.name(), args.strategy.name());

    let (records, records_path) = match &args.records {
        Some(path) => {
            let f = File::open(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let recs = read_records(&dom, BufReader::new(f))
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            (recs, None)
        }
        None => {
            if args.tasks == 0 {
                return Err(CliError::usage("--tasks must be at least 1"));
            }
            let cfg = planner_config(&args.planner)?;
            let problems = problems_with_tasks(&dom, args.tasks, args.seed);
            log::info!("collecting decisions on {} problems", problems.len());
            let recs = collect_records(
                &dom,
                &problems,
                &cfg,
                &ConstantHeuristic::default(),
                args.seed,
            )
            .map_err(CliError::internal)?;
            let path = dir.join(format!("{}-records.jsonl", dom.name()));
            let mut buf = Vec::new();
            write_records(&dom, &recs, &mut buf).map_err(CliError::internal)?;
            write_text(&path, &String::from_utf8(buf).map_err(CliError::internal)?)?;
            (recs, Some(path))
        }
    };

    let model = fit_model(&dom, &records, args.strategy.kind(), args.k, &tcfg)
        .map_err(|e| CliError::usage(format!("{stem}: {e}")))?;
    let model_path = dir.join(format!("{stem}.model.json"));
    write_text(&model_path, &(model.to_json_string() + "\n"))?;
    let curves_path = dir.join(format!("{stem}.curves.csv"));
    write_text(&curves_path, &curves_csv(&model)?)?;
    let intervals_path = match &model.intervals {
        Some(map) => {
            let mut s = String::from("interval,lower,upper,count,empty\n");
            for j in 0..map.k() {
                let _ = writeln!(
                    s,
                    "{j},{},{},{},{}",
                    map.edges[j],
                    map.upper(j),
                    map.counts[j],
                    map.empty[j]
                );
            }
            let path = dir.join(format!("{stem}.intervals.csv"));
            write_text(&path, &s)?;
            Some(path)
        }
        None => None,
    };

    let mut text = format!(
        "{} records, model {}\n",
        records.len(),
        model_path.display()
    );
    if let Some(last) = model.curves.last() {
        let _ = write!(
            text,
            "epoch {}: train loss {:.4} acc {:.3}",
            last.epoch, last.train_loss, last.train_acc
        );
        if let (Some(l), Some(a)) = (last.val_loss, last.val_acc) {
            let _ = write!(text, ", validation loss {l:.4} acc {a:.3}");
        }
        text.push('\n');
    }
    Ok(TrainOutput {
        model: model_path,
        curves: curves_path,
        intervals: intervals_path,
        records: records_path,
        text,
    })
}

fn curves_csv(model: &ModelFile) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for m in &model.curves {
        w.serialize(m).map_err(CliError::internal)?;
    }
    let bytes = w.into_inner().map_err(CliError::internal)?;
    String::from_utf8(bytes).map_err(CliError::internal)
}
