mod support;

use std::collections::HashMap;
use std::time::Duration;

use rae_core::domains;
use rae_core::interp::ast::dsl::*;
use rae_core::model::{Domain, DomainBuilder, RefinementStack, State, Task};
use rae_core::planner::{
    select_method, ConstantHeuristic, Exploration, LogEntry, PlanError, PlannerConfig, Upom,
};
use rae_core::sim::SimRng;
use rae_core::utility::Utility;
use support::oracle::root_values;

fn root_task(dom: &Domain) -> Task {
    Task::new(dom.task_by_name("t").unwrap(), vec![])
}

fn fixed(n_ro: usize) -> PlannerConfig {
    PlannerConfig {
        n_ro,
        exploration: Exploration::Fixed(2.0),
        ..PlannerConfig::default()
    }
}

#[test]
fn converges_to_exact_values_on_micro_domains() {
    let h = ConstantHeuristic::default();
    let cfg = fixed(10_000);
    for name in ["micro-1", "micro-2", "micro-3", "micro-4", "micro-5"] {
        let dom = domains::build(name).unwrap();
        let s = State::initial(&dom);
        let task = root_task(&dom);
        let exact = root_values(&dom, &s, &task);
        let best = exact
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(m, _)| m.clone())
            .unwrap();
        for seed in 0..10 {
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
            .unwrap();
            assert_eq!(sel.method, best, "{name} seed {seed}");
            for (i, (m, v)) in exact.iter().enumerate() {
                assert_eq!(&sel.root.candidates[i], m);
                let err = (sel.root.q[i] - v).abs() / v;
                assert!(
                    err < 0.05,
                    "{name} seed {seed} {}: q={} exact={v}",
                    dom.fmt_method(m),
                    sel.root.q[i]
                );
            }
        }
    }
}

#[test]
fn gamble_beats_the_safe_chain_on_micro_1() {
    let dom = domains::build("micro-1").unwrap();
    let s = State::initial(&dom);
    let task = root_task(&dom);
    let exact = root_values(&dom, &s, &task);
    assert!((exact[0].1 - 0.5).abs() < 1e-12);
    assert!((exact[1].1 - 0.6).abs() < 1e-12);
}

#[test]
fn q_values_replay_from_the_rollout_log() {
    let dom = domains::build("micro-5").unwrap();
    let s = State::initial(&dom);
    let cfg = PlannerConfig {
        record_log: true,
        ..fixed(2_000)
    };
    let mut rng = SimRng::new(3);
    let sel = select_method(
        &dom,
        &s,
        &root_task(&dom),
        &RefinementStack::new(),
        &[],
        &cfg,
        &ConstantHeuristic::default(),
        &mut rng,
    )
    .unwrap();
    let mut credits: HashMap<(Vec<u8>, String), Vec<f64>> = HashMap::new();
    for e in &sel.log {
        if let LogEntry::Decision {
            node,
            chosen,
            lambda,
            ..
        } = e
        {
            assert!(lambda.is_finite());
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
                .get(&(key.as_bytes().to_vec(), dom.fmt_method(m)))
                .cloned()
                .unwrap_or_default();
            assert_eq!(ls.len() as u64, node.n[i]);
            if !ls.is_empty() {
                let mean = ls.iter().sum::<f64>() / ls.len() as f64;
                assert!(
                    (mean - node.q[i]).abs() <= 1e-9,
                    "mean {mean} vs q {}",
                    node.q[i]
                );
                checked += 1;
            }
        }
        assert_eq!(node.n_tau, node.n.iter().sum::<u64>());
    }
    assert!(checked >= 4);
    assert_eq!(sel.rollouts, 2_000);
}

#[test]
fn every_candidate_is_tried_before_ucb() {
    let dom = domains::build("micro-2").unwrap();
    let s = State::initial(&dom);
    let cfg = PlannerConfig {
        record_log: true,
        ..fixed(50)
    };
    let mut rng = SimRng::new(9);
    let sel = select_method(
        &dom,
        &s,
        &root_task(&dom),
        &RefinementStack::new(),
        &[],
        &cfg,
        &ConstantHeuristic::default(),
        &mut rng,
    )
    .unwrap();
    let first: Vec<String> = sel
        .log
        .iter()
        .filter_map(|e| match e {
            LogEntry::Decision { chosen, .. } => Some(dom.fmt_method(chosen)),
            _ => None,
        })
        .take(3)
        .collect();
    let mut sorted = first.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 3, "first three root decisions {first:?}");
}

#[test]
fn rollout_count_is_linear_in_levels() {
    let dom = domains::build("micro-3").unwrap();
    let s = State::initial(&dom);
    let cfg = PlannerConfig {
        deepening: true,
        d_max: Some(4),
        ..fixed(25)
    };
    let mut rng = SimRng::new(1);
    let sel = select_method(
        &dom,
        &s,
        &root_task(&dom),
        &RefinementStack::new(),
        &[],
        &cfg,
        &ConstantHeuristic::default(),
        &mut rng,
    )
    .unwrap();
    assert_eq!(sel.rollouts, 100);
}

#[test]
fn fixed_seed_is_deterministic() {
    let dom = domains::build("micro-4").unwrap();
    let s = State::initial(&dom);
    let run = |seed| {
        let mut rng = SimRng::new(seed);
        let sel = select_method(
            &dom,
            &s,
            &root_task(&dom),
            &RefinementStack::new(),
            &[],
            &PlannerConfig::default(),
            &ConstantHeuristic::default(),
            &mut rng,
        )
        .unwrap();
        (sel.method, sel.root.q, sel.root.n, rng.draws())
    };
    assert_eq!(run(5), run(5));
}

#[test]
fn zero_time_budget_returns_heuristic_choice() {
    struct PreferLast;
    impl rae_core::planner::Heuristic for PreferLast {
        fn estimate(
            &self,
            _: &Domain,
            _: &State,
            _: &Task,
            m: rae_core::model::MethodId,
        ) -> Utility {
            Utility::Finite(m.index() as f64)
        }
    }
    let dom = domains::build("micro-2").unwrap();
    let s = State::initial(&dom);
    let cfg = PlannerConfig {
        time_budget: Some(Duration::ZERO),
        ..fixed(1000)
    };
    let mut rng = SimRng::new(0);
    let sel = select_method(
        &dom,
        &s,
        &root_task(&dom),
        &RefinementStack::new(),
        &[],
        &cfg,
        &PreferLast,
        &mut rng,
    )
    .unwrap();
    assert_eq!(dom.fmt_method(&sel.method), "mC()");
    assert_eq!(sel.rollouts, 0);
    assert_eq!(rng.draws(), 0);
}

#[test]
fn single_candidate_needs_no_rollout() {
    let dom = domains::build("micro-2").unwrap();
    let s = State::initial(&dom);
    let task = root_task(&dom);
    let all = rae_core::model::applicable(&dom, &s, &task);
    let mut rng = SimRng::new(0);
    let sel = select_method(
        &dom,
        &s,
        &task,
        &RefinementStack::new(),
        &all[..2],
        &fixed(100),
        &ConstantHeuristic::default(),
        &mut rng,
    )
    .unwrap();
    assert_eq!(sel.method, all[2]);
    assert_eq!(sel.rollouts, 0);
}

#[test]
fn excluding_everything_is_a_selection_failure() {
    let dom = domains::build("micro-1").unwrap();
    let s = State::initial(&dom);
    let task = root_task(&dom);
    let all = rae_core::model::applicable(&dom, &s, &task);
    let mut rng = SimRng::new(0);
    let err = select_method(
        &dom,
        &s,
        &task,
        &RefinementStack::new(),
        &all,
        &fixed(10),
        &ConstantHeuristic::default(),
        &mut rng,
    )
    .unwrap_err();
    assert_eq!(err, PlanError::NoApplicable);
}

fn chain_domain() -> Domain {
    let mut b = DomainBuilder::new("chain");
    let t = b.task("t", &[]);
    let two = b.action("two", &[]).outcome("ok", 1.0, 2.0, vec![]).build();
    let three = b
        .action("three", &[])
        .outcome("ok", 1.0, 3.0, vec![])
        .build();
    b.method("m", t, &[])
        .body(vec![act(two, []), act(three, [])])
        .build();
    b.finish().unwrap()
}

#[test]
fn rollout_composes_action_efficiencies() {
    let dom = chain_domain();
    let s = State::initial(&dom);
    let cfg = fixed(1);
    let h = ConstantHeuristic::default();
    let mut rng = SimRng::new(0);
    let mut stack = RefinementStack::new();
    stack.push(rae_core::model::Frame::unrefined(root_task(&dom)));
    let cands = rae_core::model::applicable(&dom, &s, &root_task(&dom));
    let mut upom = Upom::new(&dom, &cfg, &h, &mut rng, &s, &stack, cands);
    let u = upom.rollout(&s, &stack, None).unwrap();
    assert!((u.value() - 0.2).abs() < 1e-12);
}

#[test]
fn empty_stack_is_success_and_depth_zero_is_heuristic() {
    let dom = chain_domain();
    let s = State::initial(&dom);
    let cfg = fixed(1);
    let h = ConstantHeuristic(Utility::Finite(0.125));
    let mut rng = SimRng::new(0);
    let mut stack = RefinementStack::new();
    let mut upom = Upom::new(&dom, &cfg, &h, &mut rng, &s, &stack, vec![]);
    assert_eq!(upom.rollout(&s, &stack, None).unwrap(), Utility::SUCCESS);
    stack.push(rae_core::model::Frame::unrefined(root_task(&dom)));
    assert_eq!(
        upom.rollout(&s, &stack, Some(0)).unwrap(),
        Utility::Finite(0.125)
    );
    // one level deep: the decision is made, then the cutoff asks h again
    assert_eq!(
        upom.rollout(&s, &stack, Some(1)).unwrap(),
        Utility::Finite(0.125)
    );
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(PlannerConfig {
        n_ro: 0,
        ..PlannerConfig::default()
    }
    .validate()
    .is_err());
    assert!(PlannerConfig {
        d_max: Some(0),
        ..PlannerConfig::default()
    }
    .validate()
    .is_err());
    assert!(PlannerConfig {
        deepening: true,
        d_max: None,
        ..PlannerConfig::default()
    }
    .validate()
    .is_err());
    assert!(PlannerConfig::default().validate().is_ok());
}
