use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rae_cli::rows::HEADER;

fn rae(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rae"))
        .args(args)
        .current_dir(cwd)
        .env_remove("RAE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: Output) -> Output {
    assert!(
        o.status.success(),
        "exit {:?}\n{}{}",
        o.status.code(),
        stdout(&o),
        stderr(&o)
    );
    o
}

#[test]
fn help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(rae(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(
        rae(
            &["run", "--domain", "fetch", "--mode", "sideways"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(rae(&["frobnicate"], dir.path()).status.code(), Some(1));
    let o = rae(
        &["run", "--domain", "atlantis", "--mode", "reactive"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("atlantis"));
    let o = rae(
        &["run", "--domain", "fetch", "--mode", "upom", "--nro", "0"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn one_problem_one_run_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    ok(rae(
        &[
            "run",
            "--domain",
            "micro-1",
            "--mode",
            "reactive",
            "--runs",
            "1",
            "--problems",
            "1",
            "--out",
            "o",
        ],
        dir.path(),
    ));
    let text = fs::read_to_string(dir.path().join("o/runs.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], HEADER.join(","));
    assert!(lines[1].starts_with("micro-1,micro-1-0-000,0,reactive,0,"));
    assert!(dir.path().join("o/summary.txt").exists());
}

#[test]
fn runs_are_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "run",
            "--domain",
            "fetch,nav",
            "--mode",
            "reactive,upom",
            "--suite",
            "s3",
            "--runs",
            "2",
            "--nro",
            "20",
            "--seed",
            "7",
            "--out",
            out,
        ]
    };
    ok(rae(&args("a"), dir.path()));
    ok(rae(&args("b"), dir.path()));
    let a = fs::read(dir.path().join("a/runs.csv")).unwrap();
    let b = fs::read(dir.path().join("b/runs.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        fs::read(dir.path().join("a/summary.txt")).unwrap(),
        fs::read(dir.path().join("b/summary.txt")).unwrap()
    );
    let mut other = args("c");
    other[12] = "8";
    ok(rae(&other, dir.path()));
    assert_ne!(a, fs::read(dir.path().join("c/runs.csv")).unwrap());
}

#[test]
fn output_directory_from_environment_and_append() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let o = Command::new(env!("CARGO_BIN_EXE_rae"))
            .args([
                "run",
                "--domain",
                "micro-2",
                "--mode",
                "reactive",
                "--problems",
                "1",
                "--runs",
                "2",
                "--append",
            ])
            .current_dir(dir.path())
            .env("RAE_OUT_DIR", "from-env")
            .output()
            .unwrap();
        ok(o);
    };
    run();
    run();
    let text = fs::read_to_string(dir.path().join("from-env/runs.csv")).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().filter(|l| l.starts_with("domain,")).count(), 1);
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn report_of_empty_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "empty.csv", "");
    write(dir.path(), "header.csv", &(HEADER.join(",") + "\n"));
    let o = ok(rae(&["report", "empty.csv", "header.csv"], dir.path()));
    assert_eq!(stdout(&o), "no rows\n");
}

const FIXTURE: &str = "\
domain,problem_id,run_id,mode,task_id,success,cost,efficiency,planning_time_s,rollouts,seed
fetch,p1,0,reactive,0,1,2,0.5,0,0,1
fetch,p1,1,reactive,0,1,4,0.25,0,0,2
fetch,p2,0,reactive,0,0,3,0,0,0,3
fetch,p2,1,reactive,0,1,1,1,0,0,4
fetch,p1,0,upom,0,1,1,1,0.5,100,1
fetch,p1,1,upom,0,1,1,1,1.5,300,2
";

#[test]
fn report_reproduces_hand_computed_means() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "runs.csv", FIXTURE);
    let o = ok(rae(&["report", "runs.csv"], dir.path()));
    let text = stdout(&o);
    let line = |mode: &str| {
        text.lines()
            .find(|l| l.starts_with(&format!("fetch      {mode} ")))
            .unwrap_or_else(|| panic!("{text}"))
            .to_string()
    };
    // reactive: success 3/4; efficiency (0.5 + 0.25 + 0 + 1)/4 = 0.4375,
    // sample variance 0.546875/3, half-width 1.96·sqrt(0.182292/4) = 0.4184
    let r = line("reactive");
    assert!(r.contains("0.750 ± 0.490"), "{r}");
    assert!(r.contains("0.4375 ± 0.4184"), "{r}");
    // upom: every unit-cost run succeeds
    let u = line("upom");
    assert!(u.contains("1.000 ± 0.000"), "{u}");
    assert!(u.contains("1.0000 ± 0.0000"), "{u}");
    assert!(u.contains("1.0000") && u.contains("200.0"), "{u}");
    // gap 1 - 0.4375 with half-width 1.96·sqrt(0.182292/4 + 0)
    assert!(
        text.contains("fetch      upom       +0.5625 ± 0.4184"),
        "{text}"
    );
}

#[test]
fn report_rejects_foreign_schemas() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "bad-header.csv",
        "domain,mode,score\nfetch,upom,1\n",
    );
    let o = rae(&["report", "bad-header.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad-header.csv:1"), "{}", stderr(&o));

    let bad_row = FIXTURE.replace("fetch,p1,1,reactive,0,1,4", "fetch,p1,1,reactive,0,2,4");
    write(dir.path(), "bad-row.csv", &bad_row);
    let o = rae(&["report", "bad-row.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad-row.csv:3"), "{}", stderr(&o));

    let o = rae(&["report", "missing.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn train_is_deterministic_and_models_drive_runs() {
    let dir = tempfile::tempdir().unwrap();
    let train = |out: &'static str| {
        ok(rae(
            &[
                "train",
                "--strategy",
                "lm2",
                "--domain",
                "nav",
                "--tasks",
                "12",
                "--seed",
                "3",
                "--nro",
                "20",
                "--epochs",
                "5",
                "--hidden",
                "8",
                "--out",
                out,
            ],
            dir.path(),
        ))
    };
    train("m1");
    train("m2");
    for f in [
        "nav-lm2.model.json",
        "nav-lm2.curves.csv",
        "nav-records.jsonl",
    ] {
        let a = fs::read(dir.path().join("m1").join(f)).unwrap();
        let b = fs::read(dir.path().join("m2").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let curves = fs::read_to_string(dir.path().join("m1/nav-lm2.curves.csv")).unwrap();
    assert_eq!(
        curves.lines().next(),
        Some("epoch,train_loss,train_acc,val_loss,val_acc")
    );
    assert_eq!(curves.lines().count(), 6);

    let o = ok(rae(
        &["validate", "--model", "m1/nav-lm2.model.json"],
        dir.path(),
    ));
    assert!(stdout(&o).contains("ok (lm2 model for nav)"));

    // lm1 needs an lm1 model
    let o = rae(
        &[
            "run",
            "--domain",
            "nav",
            "--mode",
            "lm1",
            "--model",
            "m1/nav-lm2.model.json",
            "--problems",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    ok(rae(
        &[
            "run",
            "--domain",
            "nav",
            "--mode",
            "lm2",
            "--model",
            "m1/nav-lm2.model.json",
            "--problems",
            "2",
            "--runs",
            "2",
            "--out",
            "r",
        ],
        dir.path(),
    ));
    let rows = fs::read_to_string(dir.path().join("r/runs.csv")).unwrap();
    assert!(rows.lines().skip(1).all(|l| l.contains(",lm2,")));

    // a model for another domain is refused
    let o = rae(
        &[
            "run",
            "--domain",
            "fetch",
            "--mode",
            "lm2",
            "--model",
            "m1/nav-lm2.model.json",
            "--problems",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn heuristic_training_writes_intervals() {
    let dir = tempfile::tempdir().unwrap();
    ok(rae(
        &[
            "train",
            "--strategy",
            "lh",
            "--k",
            "4",
            "--domain",
            "fetch",
            "--tasks",
            "10",
            "--nro",
            "20",
            "--epochs",
            "3",
            "--hidden",
            "8",
            "--out",
            "m",
        ],
        dir.path(),
    ));
    let intervals = fs::read_to_string(dir.path().join("m/fetch-lh.intervals.csv")).unwrap();
    assert_eq!(intervals.lines().count(), 5);
    ok(rae(
        &[
            "run",
            "--domain",
            "fetch",
            "--mode",
            "upom+nnH",
            "--dmax",
            "5",
            "--nro",
            "10",
            "--model",
            "m/fetch-lh.model.json",
            "--problems",
            "2",
            "--runs",
            "1",
            "--out",
            "r",
        ],
        dir.path(),
    ));
    // retraining from the saved records gives the same model
    ok(rae(
        &[
            "train",
            "--strategy",
            "lh",
            "--k",
            "4",
            "--domain",
            "fetch",
            "--records",
            "m/fetch-records.jsonl",
            "--epochs",
            "3",
            "--hidden",
            "8",
            "--out",
            "again",
        ],
        dir.path(),
    ));
    assert_eq!(
        fs::read(dir.path().join("m/fetch-lh.model.json")).unwrap(),
        fs::read(dir.path().join("again/fetch-lh.model.json")).unwrap()
    );
}

#[test]
fn generated_problems_validate_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(rae(
        &[
            "gen", "--domain", "sr", "--count", "3", "--seed", "5", "--out", "p",
        ],
        dir.path(),
    ));
    let files: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(files.len(), 3);
    let mut args = vec!["validate", "--domain", "sr"];
    for f in &files {
        args.extend(["--problem", f.as_str()]);
    }
    let o = ok(rae(&args, dir.path()));
    assert_eq!(stdout(&o).matches(": ok (").count(), 3);

    let mut args = vec![
        "run", "--domain", "sr", "--mode", "reactive", "--runs", "1", "--seed", "5", "--out", "r",
    ];
    for f in &files {
        args.extend(["--problem-file", f.as_str()]);
    }
    ok(rae(&args, dir.path()));
    let rows = fs::read_to_string(dir.path().join("r/runs.csv")).unwrap();
    assert!(rows.contains(",sr-5-000,") && rows.contains(",sr-5-002,"));

    // the same suite generated in-process matches the files
    ok(rae(
        &[
            "run",
            "--domain",
            "sr",
            "--mode",
            "reactive",
            "--runs",
            "1",
            "--problems",
            "3",
            "--seed",
            "5",
            "--out",
            "g",
        ],
        dir.path(),
    ));
    assert_eq!(
        rows,
        fs::read_to_string(dir.path().join("g/runs.csv")).unwrap()
    );

    let o = rae(
        &["validate", "--domain", "nav", "--problem", &files[0]],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_prints_the_domain_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(rae(&["validate"], dir.path()));
    let text = stdout(&o);
    assert!(
        text.lines()
            .any(|l| l.starts_with("fetch") && l.contains("  7  10   9")),
        "{text}"
    );
    assert!(
        text.lines()
            .any(|l| l.starts_with("nav") && l.contains("  6   9  10")),
        "{text}"
    );
    assert!(
        text.lines()
            .any(|l| l.starts_with("sr") && l.contains("  8  16  14")),
        "{text}"
    );
    assert!(
        text.lines()
            .any(|l| l.starts_with("explore") && l.contains("  9  17  14")),
        "{text}"
    );
}
