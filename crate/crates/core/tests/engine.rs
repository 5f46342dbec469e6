use std::collections::HashSet;

use rae_core::domains;
use rae_core::engine::{rae_run, EngineConfig, MethodPolicy, RunReport, Selector, TraceEvent};
use rae_core::interp::ast::dsl::*;
use rae_core::model::{effect, Domain, DomainBuilder, MethodId, State, Task, BOOL};
use rae_core::planner::{ConstantHeuristic, PlannerConfig};
use rae_core::sim::{Arrival, Cause, Problem};

fn problem(dom: &Domain, arrivals: Vec<(u64, Task)>) -> Problem {
    Problem {
        id: "p".into(),
        domain: dom.name().into(),
        seed: 0,
        initial: State::initial(dom),
        arrivals: arrivals
            .into_iter()
            .map(|(tick, task)| Arrival { tick, task })
            .collect(),
        events: vec![],
    }
}

fn traced() -> EngineConfig {
    EngineConfig {
        trace: true,
        record_decisions: true,
        ..EngineConfig::default()
    }
}

fn lines(r: &RunReport) -> Vec<String> {
    r.trace.iter().map(|e| e.to_string()).collect()
}

fn trace_problem() -> (Domain, Problem) {
    let dom = domains::build("micro-trace").unwrap();
    let stow = dom.task_by_name("stow").unwrap();
    let tidy = dom.task_by_name("tidy").unwrap();
    let i1 = dom.sym("i1").unwrap();
    let i2 = dom.sym("i2").unwrap();
    let p = problem(
        &dom,
        vec![
            (0, Task::new(stow, vec![i1])),
            (0, Task::new(stow, vec![i2])),
            (1, Task::new(tidy, vec![])),
        ],
    );
    (dom, p)
}

#[test]
fn trace_matches_hand_written_fixture() {
    let (dom, p) = trace_problem();
    let r = rae_run(&dom, &p, Selector::Reactive, &traced(), 0).unwrap();
    let expected: Vec<&str> = include_str!("fixtures/micro_trace.txt").lines().collect();
    assert_eq!(lines(&r), expected);
    assert!(r.tasks.iter().all(|t| t.success));
    assert_eq!(
        r.tasks.iter().map(|t| t.cost).collect::<Vec<_>>(),
        vec![4.0, 4.0, 1.0]
    );
}

#[test]
fn no_instance_is_attempted_twice_per_frame() {
    let (dom, p) = trace_problem();
    let r = rae_run(&dom, &p, Selector::Reactive, &traced(), 0).unwrap();
    let mut seen = HashSet::new();
    for d in &r.decisions {
        assert!(seen.insert((d.root, d.task.clone(), d.method.clone())));
    }
    let failed: Vec<_> = r
        .decisions
        .iter()
        .filter(|d| d.success == Some(false))
        .collect();
    assert_eq!(failed.len(), 2);
}

#[test]
fn state_changes_only_through_logged_mutations() {
    let (dom, p) = trace_problem();
    let r = rae_run(&dom, &p, Selector::Reactive, &traced(), 0).unwrap();
    let mut s = p.initial.clone();
    for m in &r.mutations {
        assert_eq!(s.get(m.slot), m.old);
        assert!(matches!(m.cause, Cause::Action(_)));
        s.set(&dom, m.slot, m.new).unwrap();
    }
    assert_eq!(s, r.final_state);
}

fn two_step_domain() -> Domain {
    let mut b = DomainBuilder::new("two-step");
    let done = b.state_var("done", &[], BOOL);
    let t = b.task("t", &[]);
    let stuck = b.task("stuck", &[]);
    let a = b.action("a", &[]).outcome("ok", 1.0, 1.0, vec![]).build();
    let slow = b
        .action("slow", &[])
        .duration(2)
        .outcome("ok", 1.0, 1.0, vec![effect(done, [], true)])
        .build();
    b.method("m", t, &[])
        .body(vec![act(a, []), act(a, [])])
        .build();
    b.method("never", stuck, &[])
        .pre(sv(done, []))
        .body(vec![act(slow, [])])
        .build();
    let w = b.task("w", &[]);
    b.method("wait", w, &[]).body(vec![act(slow, [])]).build();
    b.finish().unwrap()
}

#[test]
fn single_task_two_unit_actions() {
    let dom = two_step_domain();
    let t = dom.task_by_name("t").unwrap();
    let r = rae_run(
        &dom,
        &problem(&dom, vec![(0, Task::new(t, vec![]))]),
        Selector::Reactive,
        &traced(),
        0,
    )
    .unwrap();
    assert_eq!(r.tasks.len(), 1);
    assert!(r.tasks[0].success);
    assert_eq!(r.tasks[0].efficiency, 0.5);
}

#[test]
fn task_without_methods_fails_immediately() {
    let dom = two_step_domain();
    let t = dom.task_by_name("stuck").unwrap();
    let r = rae_run(
        &dom,
        &problem(&dom, vec![(0, Task::new(t, vec![]))]),
        Selector::Reactive,
        &traced(),
        0,
    )
    .unwrap();
    assert!(!r.tasks[0].success);
    assert_eq!(r.tasks[0].efficiency, 0.0);
    assert_eq!(r.tasks[0].finished, 0);
}

#[test]
fn stacks_interleave() {
    let dom = two_step_domain();
    let w = dom.task_by_name("w").unwrap();
    let p = problem(
        &dom,
        vec![(0, Task::new(w, vec![])), (1, Task::new(w, vec![]))],
    );
    let r = rae_run(&dom, &p, Selector::Reactive, &traced(), 0).unwrap();
    assert_eq!(r.tasks.len(), 2);
    let l = lines(&r);
    let pos = |s: &str| {
        l.iter()
            .position(|x| x == s)
            .unwrap_or_else(|| panic!("{s} missing from {l:#?}"))
    };
    // #1 is refined while #0's two-tick action is still running
    assert!(pos("1 #0 start slow()") < pos("1 #1 select w() -> wait()"));
    assert!(pos("1 #1 select w() -> wait()") < pos("2 #0 done slow() cost=1"));
    assert!(pos("2 #0 done slow() cost=1") < pos("3 #1 done slow() cost=1"));
}

#[test]
fn running_action_does_not_touch_state() {
    let dom = two_step_domain();
    let w = dom.task_by_name("w").unwrap();
    let r = rae_run(
        &dom,
        &problem(&dom, vec![(0, Task::new(w, vec![]))]),
        Selector::Reactive,
        &traced(),
        0,
    )
    .unwrap();
    assert_eq!(r.mutations.len(), 1);
    assert_eq!(r.mutations[0].tick, 2);
}

#[test]
fn planner_leaves_the_environment_stream_alone() {
    let dom = domains::build("micro-2").unwrap();
    let t = dom.task_by_name("t").unwrap();
    let p = problem(&dom, vec![(0, Task::new(t, vec![]))]);
    let cfg = PlannerConfig {
        n_ro: 300,
        ..PlannerConfig::default()
    };
    let h = ConstantHeuristic::default();
    let r = rae_run(
        &dom,
        &p,
        Selector::Planner {
            cfg: &cfg,
            heuristic: &h,
        },
        &traced(),
        11,
    )
    .unwrap();
    let executed = r
        .trace
        .iter()
        .filter(|e| matches!(e, TraceEvent::Done { .. } | TraceEvent::ActionFailed { .. }))
        .count() as u64;
    assert!(r.tasks[0].rollouts >= 300);
    assert_eq!(r.env_draws, executed);
}

#[test]
fn runs_replay_from_the_seed() {
    let dom = domains::build("micro-5").unwrap();
    let t = dom.task_by_name("t").unwrap();
    let p = problem(
        &dom,
        vec![(0, Task::new(t, vec![])), (3, Task::new(t, vec![]))],
    );
    let cfg = PlannerConfig {
        n_ro: 200,
        ..PlannerConfig::default()
    };
    let h = ConstantHeuristic::default();
    let run = |seed| {
        lines(
            &rae_run(
                &dom,
                &p,
                Selector::Planner {
                    cfg: &cfg,
                    heuristic: &h,
                },
                &traced(),
                seed,
            )
            .unwrap(),
        )
    };
    assert_eq!(run(4), run(4));
}

#[test]
fn failure_moves_to_the_untried_alternative() {
    let dom = domains::build("micro-fail").unwrap();
    let job = dom.task_by_name("job").unwrap();
    let r = rae_run(
        &dom,
        &problem(&dom, vec![(0, Task::new(job, vec![]))]),
        Selector::Reactive,
        &traced(),
        0,
    )
    .unwrap();
    let l = lines(&r);
    assert_eq!(
        l,
        vec![
            "0 #0 arrive task job()",
            "0 #0 select job() -> try-a()",
            "1 #0 start broken()",
            "1 #0 failed broken()",
            "1 #0 retry try-a()",
            "2 #0 select job() -> try-b()",
            "3 #0 start cracked()",
            "3 #0 failed cracked()",
            "3 #0 retry try-b()",
            "4 #0 no-method job()",
            "4 #0 fail cost=2",
        ]
    );
    assert!(r.decisions.iter().all(|d| d.success == Some(false)));
}

struct Predict(Option<MethodId>);

impl MethodPolicy for Predict {
    fn choose_template(&self, _: &Domain, _: &State, _: &Task) -> Option<MethodId> {
        self.0
    }
}

#[test]
fn policy_selector_uses_prediction_then_falls_back() {
    let dom = domains::build("micro-2").unwrap();
    let t = dom.task_by_name("t").unwrap();
    let p = problem(&dom, vec![(0, Task::new(t, vec![]))]);
    let mc = dom.method_by_name("mC").unwrap();
    let r = rae_run(&dom, &p, Selector::Policy(&Predict(Some(mc))), &traced(), 0).unwrap();
    assert_eq!(r.decisions[0].method.method, mc);

    // a template of another task has no applicable instance for `t`
    let dom = domains::build("micro-3").unwrap();
    let t = dom.task_by_name("t").unwrap();
    let p = problem(&dom, vec![(0, Task::new(t, vec![]))]);
    let u1 = dom.method_by_name("u1").unwrap();
    let r = rae_run(&dom, &p, Selector::Policy(&Predict(Some(u1))), &traced(), 0).unwrap();
    assert_eq!(dom.fmt_method(&r.decisions[0].method), "m1()");
}

#[test]
fn tick_limit_aborts_pending_stacks() {
    let dom = two_step_domain();
    let w = dom.task_by_name("w").unwrap();
    let cfg = EngineConfig {
        max_ticks: 1,
        ..traced()
    };
    let r = rae_run(
        &dom,
        &problem(&dom, vec![(0, Task::new(w, vec![]))]),
        Selector::Reactive,
        &cfg,
        0,
    )
    .unwrap();
    assert!(!r.tasks[0].success);
    assert!(lines(&r).contains(&"1 #0 abort".to_string()));
}
