//! Acceptance checks. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;
#[path = "../../core/tests/support/separable.rs"]
mod separable;

use std::collections::HashMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use clap::Parser;
use rae_cli::cli::{Cli, Command as Sub};
use rae_cli::rows::Row;
use rae_cli::summary::{gap, summarize, Group};
use rae_core::domains;
use rae_core::engine::{rae_run, EngineConfig, Selector};
use rae_core::learn::{
    collect_records, fit_model, input_widths, lh_examples, lm_examples, train, utilities, FitError,
    Input, IntervalMap, Mlp, ModelKind, Strategy as DataStrategy, TrainConfig,
};
use rae_core::model::{Domain, RefinementStack, State, Task};
use rae_core::planner::{select_method, ConstantHeuristic, Exploration, LogEntry, PlannerConfig};
use rae_core::sim::{Arrival, Problem, SimRng};
use rae_core::utility::Utility;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))?;
    Ok(t)
}

fn random_utility(rng: &mut SimRng) -> Utility {
    match rng.below(10) {
        0 => Utility::SUCCESS,
        1 => Utility::FAILURE,
        _ => Utility::finite(10f64.powf(6.0 * rng.next_f64() - 3.0)),
    }
}

fn close(a: Utility, b: Utility) -> bool {
    match (a, b) {
        (Utility::Finite(x), Utility::Finite(y)) if x != 0.0 && y != 0.0 => {
            (x - y).abs() <= 1e-9 * x.abs().max(y.abs())
        }
        _ => a == b,
    }
}

fn utility_algebra() -> Outcome {
    let start = Instant::now();
    let mut rng = SimRng::new(1);
    let n = 100_000;
    for i in 0..n {
        let (a, b, c) = (
            random_utility(&mut rng),
            random_utility(&mut rng),
            random_utility(&mut rng),
        );
        let exact = [a, b, c]
            .iter()
            .any(|u| u.is_infinite() || *u == Utility::FAILURE);
        let comm = (a + b, b + a);
        let assoc = ((a + b) + c, a + (b + c));
        if exact {
            ensure(comm.0 == comm.1 && assoc.0 == assoc.1, || {
                format!("triple {i} ({a}, {b}, {c}) not exact")
            })?;
        } else {
            ensure(close(comm.0, comm.1), || {
                format!("commutativity fails on ({a}, {b})")
            })?;
            ensure(close(assoc.0, assoc.1), || {
                format!("associativity fails on ({a}, {b}, {c})")
            })?;
        }
        ensure(
            a + Utility::SUCCESS == a && Utility::SUCCESS + a == a,
            || format!("identity fails on {a}"),
        )?;
        ensure(
            a + Utility::FAILURE == Utility::FAILURE && Utility::FAILURE + a == Utility::FAILURE,
            || format!("absorption fails on {a}"),
        )?;
    }
    let t = within_time(start, Duration::from_secs(5))?;
    Ok(format!("{n} triples in {t:.2?}"))
}

fn oracle_convergence() -> Outcome {
    let start = Instant::now();
    let h = ConstantHeuristic::default();
    let cfg = PlannerConfig {
        n_ro: 10_000,
        d_max: None,
        exploration: Exploration::Fixed(2.0),
        ..PlannerConfig::default()
    };
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for name in ["micro-1", "micro-2", "micro-3", "micro-4", "micro-5"] {
        let dom = domains::build(name).map_err(|e| e.to_string())?;
        let s = State::initial(&dom);
        let task = Task::new(dom.task_by_name("t").ok_or("no task t")?, vec![]);
        let exact = oracle::root_values(&dom, &s, &task);
        let best = exact
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(m, _)| m.clone())
            .ok_or("no candidates")?;
        let mut hits = 0;
        for seed in 0..100 {
            let mut rng = SimRng::new(seed);
            let sel = select_method(
                &dom,
                &s,
                &task,
                &RefinementStack::new(),
                &[],
                &cfg,
                &h,
                &mut rng,
            )
            .map_err(|e| e.to_string())?;
            if sel.method == best {
                hits += 1;
            }
            for (i, (m, v)) in exact.iter().enumerate() {
                ensure(&sel.root.candidates[i] == m, || {
                    format!("{name}: candidate order differs")
                })?;
                let err = (sel.root.q[i] - v).abs() / v;
                worst = worst.max(err);
                ensure(err <= 0.05, || {
                    format!(
                        "{name} seed {seed} {}: Q {} vs exact {v}",
                        dom.fmt_method(m),
                        sel.root.q[i]
                    )
                })?;
            }
        }
        ensure(hits >= 95, || {
            format!("{name}: optimal method chosen in {hits}/100 trials")
        })?;
        detail.push(format!("{name} {hits}/100"));
    }
    let t = within_time(start, Duration::from_secs(120))?;
    Ok(format!(
        "{}; worst Q error {:.2}%; {t:.1?}",
        detail.join(", "),
        100.0 * worst
    ))
}

/// Replays the rollout log of one `select_method` call; returns the number
/// of (node, method) pairs checked.
fn audit(
    dom: &Domain,
    s: &State,
    task: &Task,
    cfg: &PlannerConfig,
    seed: u64,
) -> Result<usize, String> {
    let mut rng = SimRng::new(seed);
    let sel = select_method(
        dom,
        s,
        task,
        &RefinementStack::new(),
        &[],
        cfg,
        &ConstantHeuristic::default(),
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    let mut credits: HashMap<(Vec<u8>, String), Vec<f64>> = HashMap::new();
    for e in &sel.log {
        if let LogEntry::Decision {
            node,
            chosen,
            lambda,
            ..
        } = e
        {
            credits
                .entry((node.as_bytes().to_vec(), dom.fmt_method(chosen)))
                .or_default()
                .push(*lambda);
        }
    }
    let mut checked = 0;
    for (key, node) in sel.stats.iter() {
        for (i, m) in node.candidates.iter().enumerate() {
            let ls = credits
                .remove(&(key.as_bytes().to_vec(), dom.fmt_method(m)))
                .unwrap_or_default();
            ensure(ls.len() as u64 == node.n[i], || {
                format!(
                    "{}: {} credits for n = {}",
                    dom.fmt_method(m),
                    ls.len(),
                    node.n[i]
                )
            })?;
            if !ls.is_empty() {
                let mean = ls.iter().sum::<f64>() / ls.len() as f64;
                ensure((mean - node.q[i]).abs() <= 1e-9, || {
                    format!("{}: mean {mean} vs Q {}", dom.fmt_method(m), node.q[i])
                })?;
                checked += 1;
            }
        }
    }
    ensure(credits.is_empty(), || {
        format!("{} logged decisions have no statistics", credits.len())
    })?;
    Ok(checked)
}

fn q_audit() -> Outcome {
    let mut checked = 0;
    let fixed = PlannerConfig {
        n_ro: 2_000,
        exploration: Exploration::Fixed(2.0),
        record_log: true,
        ..PlannerConfig::default()
    };
    for (i, name) in ["micro-1", "micro-2", "micro-3", "micro-4", "micro-5"]
        .iter()
        .enumerate()
    {
        let dom = domains::build(name).map_err(|e| e.to_string())?;
        let task = Task::new(dom.task_by_name("t").ok_or("no task t")?, vec![]);
        checked += audit(&dom, &State::initial(&dom), &task, &fixed, i as u64)?;
    }
    let auto = PlannerConfig {
        n_ro: 300,
        record_log: true,
        ..PlannerConfig::default()
    };
    for name in domains::BENCHMARKS {
        let dom = domains::build(name).map_err(|e| e.to_string())?;
        let p = domains::generate(&dom, 4, 0);
        checked += audit(&dom, &p.initial, &p.arrivals[0].task, &auto, 4)?;
    }
    Ok(format!("{checked} (node, method) means replayed"))
}

fn trace_equivalence() -> Outcome {
    let dom = domains::build("micro-trace").map_err(|e| e.to_string())?;
    let task = |name: &str, args: Vec<&str>| -> Result<Task, String> {
        let id = dom.task_by_name(name).ok_or(format!("no task {name}"))?;
        let args = args
            .iter()
            .map(|a| dom.sym(a).ok_or(format!("no symbol {a}")))
            .collect::<Result<_, _>>()?;
        Ok(Task::new(id, args))
    };
    let arrivals = vec![
        Arrival {
            tick: 0,
            task: task("stow", vec!["i1"])?,
        },
        Arrival {
            tick: 0,
            task: task("stow", vec!["i2"])?,
        },
        Arrival {
            tick: 1,
            task: task("tidy", vec![])?,
        },
    ];
    let p = Problem {
        id: "trace".into(),
        domain: dom.name().into(),
        seed: 0,
        initial: State::initial(&dom),
        arrivals,
        events: vec![],
    };
    let ecfg = EngineConfig {
        trace: true,
        ..EngineConfig::default()
    };
    let r = rae_run(&dom, &p, Selector::Reactive, &ecfg, 0).map_err(|e| e.to_string())?;
    let got: Vec<String> = r.trace.iter().map(|e| e.to_string()).collect();
    let expected: Vec<&str> = include_str!("../../core/tests/fixtures/micro_trace.txt")
        .lines()
        .collect();
    ensure(
        expected.iter().any(|l| l.contains(" failed "))
            && expected.iter().any(|l| l.contains(" retry ")),
        || "fixture has no failure and retry".into(),
    )?;
    for (i, (g, e)) in got.iter().zip(&expected).enumerate() {
        ensure(g == e, || {
            format!("line {}: got `{g}`, expected `{e}`", i + 1)
        })?;
    }
    ensure(got.len() == expected.len(), || {
        format!("{} trace lines, expected {}", got.len(), expected.len())
    })?;
    Ok(format!(
        "{} lines match, including a failed action and its retry",
        got.len()
    ))
}

fn cli(args: &[&str]) -> Result<Vec<Row>, String> {
    let parsed = Cli::try_parse_from(std::iter::once("rae").chain(args.iter().copied()))
        .map_err(|e| e.to_string())?;
    match &parsed.command {
        Sub::Run(a) => Ok(rae_cli::commands::run::execute(a)
            .map_err(|e| e.to_string())?
            .rows),
        _ => rae_cli::dispatch(&parsed)
            .map(|_| Vec::new())
            .map_err(|e| e.to_string()),
    }
}

fn group<'a>(groups: &'a [Group], mode: &str) -> Result<&'a Group, String> {
    groups
        .iter()
        .find(|g| g.mode == mode)
        .ok_or(format!("no rows for mode {mode}"))
}

fn upom_beats_reactive(dir: &Path) -> Outcome {
    let start = Instant::now();
    let out = dir.join("c5");
    let rows = cli(&[
        "run",
        "--domain",
        "fetch",
        "--mode",
        "reactive,upom",
        "--suite",
        "s20",
        "--runs",
        "20",
        "--nro",
        "500",
        "--seed",
        "0",
        "--out",
        out.to_str().ok_or("path")?,
    ])?;
    let groups = summarize(&rows);
    let (r, u) = (group(&groups, "reactive")?, group(&groups, "upom")?);
    let g = gap(u.efficiencies(), r.efficiencies());
    let detail = format!(
        "efficiency {:.4} vs {:.4} (gap {:+.4} ± {:.4}), success {:.3} vs {:.3}, {} tasks each",
        u.efficiency.mean,
        r.efficiency.mean,
        g.mean,
        g.half_width,
        u.success.mean,
        r.success.mean,
        u.efficiency.n
    );
    ensure(u.efficiency.mean > r.efficiency.mean, || detail.clone())?;
    ensure(u.success.mean > r.success.mean, || detail.clone())?;
    ensure(g.low() > 0.0, || detail.clone())?;
    let t = within_time(start, Duration::from_secs(15 * 60))?;
    Ok(format!("{detail}; {t:.1?}"))
}

fn reduced_budget(dir: &Path) -> Outcome {
    let models = dir.join("c6-models");
    let models_s = models.to_str().ok_or("path")?;
    cli(&[
        "train",
        "--strategy",
        "lh",
        "--domain",
        "fetch",
        "--tasks",
        "200",
        "--nro",
        "200",
        "--seed",
        "1",
        "--out",
        models_s,
    ])?;
    let model = models.join("fetch-lh.model.json");
    let out = dir.join("c6");
    let out_s = out.to_str().ok_or("path")?;
    let suite = [
        "--domain", "fetch", "--suite", "s20", "--runs", "5", "--seed", "2", "--timing", "--out",
        out_s, "--append",
    ];
    let mut rows = Vec::new();
    rows.extend(cli(
        &[&["run", "--mode", "reactive"][..], &suite[..]].concat()
    )?);
    rows.extend(cli(&[
        &["run", "--mode", "upom", "--nro", "1000", "--dmax", "inf"][..],
        &suite[..],
    ]
    .concat())?);
    rows.extend(cli(&[
        &[
            "run",
            "--mode",
            "upom+nnH",
            "--nro",
            "50",
            "--dmax",
            "5",
            "--model",
            model.to_str().ok_or("path")?,
        ][..],
        &suite[..],
    ]
    .concat())?);
    let groups = summarize(&rows);
    let (r, full, h) = (
        group(&groups, "reactive")?,
        group(&groups, "upom")?,
        group(&groups, "upom+nnH")?,
    );
    let saving = 1.0 - h.planning_time / full.planning_time;
    let detail = format!(
        "planning {:.5} s/task vs {:.5} s/task ({:.1}% less), success {:.3} vs reactive {:.3}",
        h.planning_time,
        full.planning_time,
        100.0 * saving,
        h.success.mean,
        r.success.mean
    );
    ensure(full.planning_time > 0.0 && saving >= 0.8, || detail.clone())?;
    ensure(h.success.mean >= r.success.mean, || detail.clone())?;
    Ok(detail)
}

fn learning_correctness() -> Outcome {
    let mut rng = SimRng::new(17);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let (i, hdn, o) = (2 + rng.below(6), 2 + rng.below(6), 2 + rng.below(4));
        let net = Mlp::new(i, hdn, o, &mut rng.stream(&format!("net{trial}")));
        let xs: Vec<Vec<f64>> = (0..1 + rng.below(4))
            .map(|_| (0..i).map(|_| 2.0 * rng.next_f64() - 1.0).collect())
            .collect();
        let batch: Vec<(Input, usize)> =
            xs.iter().map(|x| (Input::Dense(x), rng.below(o))).collect();
        let (g, _) = net.grad(&batch).map_err(|e| e.to_string())?;
        let g = g.flat();
        let step = 1e-5;
        for (k, &analytic) in g.iter().enumerate() {
            let mut plus = net.clone();
            plus.set_param(k, net.param(k) + step);
            let mut minus = net.clone();
            minus.set_param(k, net.param(k) - step);
            let lp = plus.grad(&batch).map_err(|e| e.to_string())?.1;
            let lm = minus.grad(&batch).map_err(|e| e.to_string())?.1;
            let numeric = (lp - lm) / (2.0 * step);
            let rel = (numeric - analytic).abs() / (numeric.abs() + analytic.abs()).max(1e-7);
            worst = worst.max(rel);
            ensure(rel <= 1e-4, || {
                format!("instance {trial} param {k}: analytic {analytic} numeric {numeric}")
            })?;
        }
    }

    for out in [2, 3, 7, 10] {
        let net = Mlp::zeros(4, 5, out);
        let x = [0.3, -1.0, 2.0, 0.5];
        let loss = net
            .loss(Input::Dense(&x), out - 1)
            .map_err(|e| e.to_string())?;
        ensure((loss - (out as f64).ln()).abs() <= 1e-6, || {
            format!("zero net with {out} outputs has loss {loss}")
        })?;
    }

    let cfg = TrainConfig {
        hidden: 16,
        lr: 0.1,
        epochs: 40,
        ..TrainConfig::default()
    };
    let dom = domains::build("micro-sep").map_err(|e| e.to_string())?;
    let (lm_width, lh_width) = input_widths(&dom);
    let records = separable::separable_records(&dom, 500, 3);
    let data = lm_examples(&dom, &records, DataStrategy::All).map_err(|e| e.to_string())?;
    let (_, curves) =
        train(&data, lm_width, dom.methods().len(), &cfg).map_err(|e| e.to_string())?;
    let lm_acc = curves
        .last()
        .and_then(|c| c.val_acc)
        .ok_or("no validation accuracy")?;
    ensure(lm_acc >= 0.9, || format!("LM validation accuracy {lm_acc}"))?;

    let records = separable::separable_records(&dom, 600, 7);
    let map = IntervalMap::fit(&utilities(&records), 4).map_err(|e| e.to_string())?;
    let data = lh_examples(&dom, &records, &map).map_err(|e| e.to_string())?;
    let (_, curves) = train(&data, lh_width, map.k(), &cfg).map_err(|e| e.to_string())?;
    let lh_acc = curves
        .last()
        .and_then(|c| c.val_acc)
        .ok_or("no validation accuracy")?;
    let chance = 1.0 / map.k() as f64;
    ensure(lh_acc >= 3.0 * chance, || {
        format!("LH validation accuracy {lh_acc}, chance {chance}")
    })?;
    Ok(format!(
        "worst gradient error {worst:.1e}; LM accuracy {lm_acc:.3}; LH accuracy {lh_acc:.3} (K = {})",
        map.k()
    ))
}

fn filter_semantics() -> Outcome {
    let dom = domains::build("micro-fail").map_err(|e| e.to_string())?;
    let p = Problem {
        id: "fail".into(),
        domain: dom.name().into(),
        seed: 0,
        initial: State::initial(&dom),
        arrivals: vec![Arrival {
            tick: 0,
            task: Task::new(dom.task_by_name("job").ok_or("no task job")?, vec![]),
        }],
        events: vec![],
    };
    let cfg = PlannerConfig {
        n_ro: 20,
        ..PlannerConfig::default()
    };
    let records = collect_records(&dom, &[p], &cfg, &ConstantHeuristic::default(), 1)
        .map_err(|e| e.to_string())?;
    let lm1 = lm_examples(&dom, &records, DataStrategy::SuccessOnly).map_err(|e| e.to_string())?;
    let lm2 = lm_examples(&dom, &records, DataStrategy::All).map_err(|e| e.to_string())?;
    ensure(lm1.is_empty() && !lm2.is_empty(), || {
        format!("LM-1 {} examples, LM-2 {}", lm1.len(), lm2.len())
    })?;
    let tcfg = TrainConfig::default();
    let fit1 = fit_model(&dom, &records, ModelKind::Lm1, 10, &tcfg);
    ensure(
        matches!(fit1, Err(FitError::NoExamples(ModelKind::Lm1))),
        || format!("LM-1 fit gave {fit1:?}"),
    )?;
    fit_model(&dom, &records, ModelKind::Lm2, 10, &tcfg).map_err(|e| e.to_string())?;
    Ok(format!("LM-1 0 examples, LM-2 {} examples", lm2.len()))
}

fn rae_bin(args: &[&str], cwd: &Path) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_rae"))
        .args(args)
        .current_dir(cwd)
        .env_remove("RAE_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || {
        format!(
            "rae {}: {}",
            args.join(" "),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn determinism(dir: &Path) -> Outcome {
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "run",
            "--domain",
            "fetch,sr",
            "--mode",
            "reactive,upom",
            "--suite",
            "s4",
            "--runs",
            "3",
            "--nro",
            "50",
            "--seed",
            "9",
        ],
        vec![
            "train",
            "--strategy",
            "lm1",
            "--domain",
            "explore",
            "--tasks",
            "20",
            "--nro",
            "30",
            "--epochs",
            "5",
            "--seed",
            "9",
        ],
        vec![
            "train",
            "--strategy",
            "lh",
            "--domain",
            "nav",
            "--tasks",
            "20",
            "--nro",
            "30",
            "--epochs",
            "5",
            "--seed",
            "9",
        ],
        vec!["gen", "--domain", "explore", "--count", "4", "--seed", "9"],
    ];
    let mut compared = 0;
    for (i, args) in invocations.iter().enumerate() {
        let outs = [dir.join(format!("c9-{i}-a")), dir.join(format!("c9-{i}-b"))];
        for out in &outs {
            let mut full = args.clone();
            full.extend(["--out", out.to_str().ok_or("path")?]);
            rae_bin(&full, dir)?;
        }
        let mut names: Vec<_> = fs::read_dir(&outs[0])
            .map_err(|e| e.to_string())?
            .map(|e| e.map(|e| e.file_name()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        names.sort();
        ensure(!names.is_empty(), || {
            format!("rae {} wrote nothing", args.join(" "))
        })?;
        for name in names {
            let a = fs::read(outs[0].join(&name)).map_err(|e| e.to_string())?;
            let b = fs::read(outs[1].join(&name)).map_err(|e| e.to_string())?;
            ensure(a == b, || {
                format!("{} differs between repeated runs", name.to_string_lossy())
            })?;
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} output files byte-identical across repeats"
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let d = dir.path();
    let criteria: Vec<(&str, Check)> = vec![
        ("utility algebra", Box::new(utility_algebra)),
        (
            "planner converges to the oracle",
            Box::new(oracle_convergence),
        ),
        (
            "Q statistics replay from the rollout log",
            Box::new(q_audit),
        ),
        (
            "engine trace equals the fixture",
            Box::new(trace_equivalence),
        ),
        (
            "upom beats reactive on fetch",
            Box::new(|| upom_beats_reactive(d)),
        ),
        (
            "reduced-budget learned heuristic",
            Box::new(|| reduced_budget(d)),
        ),
        ("learning correctness", Box::new(learning_correctness)),
        ("LM-1 and LM-2 filters", Box::new(filter_semantics)),
        ("CLI determinism", Box::new(|| determinism(d))),
    ];
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS {n} {name}: {detail} [{:.1?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {n} {name}: {detail} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
