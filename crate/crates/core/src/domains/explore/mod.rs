//! Exploration of an unknown area by ground robots and a drone. Sites are
//! surveyed, monitored, screened or sampled; screening and sampling need
//! equipment kept at the base, and robots return there to deposit data and
//! recharge. Animals appear at sites and block work until scared off or
//! gone.

pub mod consts;

use consts::*;

use crate::interp::ast::dsl::*;
use crate::interp::Expr;
use crate::model::{
    effect, ActionId, Domain, DomainBuilder, DomainError, Features, State, Task, Value, BOOL,
};
use crate::sim::{Arrival, ExoEffect, ExoEvent, Problem, SimRng};

pub fn build() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("explore");
    let site_names: Vec<&str> = SITES.iter().map(|s| s.0).collect();
    let (site, sites) = b.enum_type("site", &site_names);
    let robot_names: Vec<&str> = UGVS.iter().chain(UAVS.iter()).copied().collect();
    let (robot, robots) = b.enum_type("robot", &robot_names);
    let (equip, equips) = b.enum_type("equipment", &EQUIPMENT);
    let (rtype, rtypes) = b.enum_type("rtype", &["UGV", "UAV"]);
    let (ugv, uav) = (rtypes[0], rtypes[1]);
    let nil = b.sym("nil");
    let gear_ty = b.add_type("gear", [vec![nil], equips.clone()].concat());
    let base = sites[0];
    let holder = b.add_type("holder", [vec![base], robots.clone()].concat());
    let level = b.int_type("level", 0, MAX_CHARGE);
    let store = b.int_type("store", 0, DATA_CAPACITY);
    let (thermal, sampler) = (equips[1], equips[2]);

    let robot_type = b.state_var("robotType", &[robot], rtype);
    let at = b.state_var("loc", &[robot], site);
    let charge = b.state_var("charge", &[robot], level);
    let data = b.state_var("data", &[robot], store);
    let gear = b.state_var("gear", &[robot], gear_ty);
    let eq_at = b.state_var("equipAt", &[equip], holder);
    let animal = b.state_var("animal", &[site], BOOL);
    let surveyed = b.state_var("surveyed", &[site], BOOL);
    let monitored = b.state_var("monitored", &[site], BOOL);
    let screened = b.state_var("screened", &[site], BOOL);
    let sampled = b.state_var("sampled", &[site], BOOL);

    let mut table = Vec::new();
    for (i, a) in SITES.iter().enumerate() {
        for (j, c) in SITES.iter().enumerate() {
            let d = (a.1 - c.1).abs() + (a.2 - c.2).abs();
            table.push((vec![sites[i], sites[j]], Value::Int(d)));
        }
    }
    let dist = b.rigid("dist", &[site, site], Value::Int(0), table);

    let survey = b.task("survey", &[site]);
    let monitor = b.task("monitor", &[site]);
    let screen = b.task("screen", &[site]);
    let sample = b.task("sample", &[site]);
    let move_to = b.task("moveTo", &[robot, site]);
    let recharge = b.task("recharge", &[robot]);
    let get_equipment = b.task("getEquipment", &[robot, equip]);
    let deposit_data = b.task("depositData", &[robot]);
    let handle_animal = b.event("handleAnimal", &[site]);

    let here = |r: Expr| sv(at, [r]);
    let d_to = |r: Expr, l: Expr| rigid(dist, [sv(at, [r]), l]);
    let is = |r: Expr, t: Value| eq(sv(robot_type, [r]), t);

    let travel = |b: &mut DomainBuilder, name: &str, kind: Value| {
        b.action(name, &[("r", robot), ("l", site)])
            .pre(all_of([
                is(arg(0), kind),
                ne(here(arg(0)), arg(1)),
                ge(sv(charge, [arg(0)]), d_to(arg(0), arg(1))),
            ]))
            .outcome_with_cost(
                "arrived",
                1.0,
                d_to(arg(0), arg(1)),
                vec![
                    effect(at, [arg(0)], arg(1)),
                    effect(
                        charge,
                        [arg(0)],
                        sub(sv(charge, [arg(0)]), d_to(arg(0), arg(1))),
                    ),
                ],
            )
            .build()
    };
    let drive = travel(&mut b, "move", ugv);
    let fly = travel(&mut b, "fly", uav);

    let work = |b: &mut DomainBuilder,
                name: &str,
                done,
                cost: f64,
                needs: Option<Value>,
                duration: u32| {
        let mut pre = all_of([
            eq(here(arg(0)), arg(1)),
            not(sv(animal, [arg(1)])),
            lt(sv(data, [arg(0)]), DATA_CAPACITY),
        ]);
        if let Some(e) = needs {
            pre = and(pre, eq(sv(gear, [arg(0)]), e));
        }
        b.action(name, &[("r", robot), ("l", site)])
            .pre(pre)
            .duration(duration)
            .outcome(
                "recorded",
                WORK_SUCCESS,
                cost,
                vec![
                    effect(done, [arg(1)], true),
                    effect(data, [arg(0)], add(sv(data, [arg(0)]), 1)),
                ],
            )
            .failure("spoiled", 1.0 - WORK_SUCCESS, cost)
            .build()
    };
    let do_survey = work(&mut b, "doSurvey", surveyed, SURVEY_COST, None, 1);
    let do_monitor = work(
        &mut b,
        "doMonitor",
        monitored,
        MONITOR_COST,
        None,
        MONITOR_DURATION,
    );
    let do_screen = work(&mut b, "doScreen", screened, SCREEN_COST, Some(thermal), 1);
    let do_sample = work(&mut b, "doSample", sampled, SAMPLE_COST, Some(sampler), 1);

    let charge_up = b
        .action("charge", &[("r", robot)])
        .pre(eq(here(arg(0)), base))
        .outcome(
            "charged",
            1.0,
            CHARGE_COST,
            vec![effect(charge, [arg(0)], MAX_CHARGE)],
        )
        .build();
    let deposit = b
        .action("deposit", &[("r", robot)])
        .pre(eq(here(arg(0)), base))
        .outcome("stored", 1.0, DEPOSIT_COST, vec![effect(data, [arg(0)], 0)])
        .build();
    let pick = b
        .action("pickEquip", &[("r", robot), ("e", equip)])
        .pre(all_of([
            eq(here(arg(0)), base),
            eq(sv(eq_at, [arg(1)]), base),
            eq(sv(gear, [arg(0)]), nil),
        ]))
        .outcome(
            "picked",
            1.0,
            EQUIP_COST,
            vec![
                effect(eq_at, [arg(1)], arg(0)),
                effect(gear, [arg(0)], arg(1)),
            ],
        )
        .build();
    let drop = b
        .action("dropEquip", &[("r", robot)])
        .pre(and(eq(here(arg(0)), base), ne(sv(gear, [arg(0)]), nil)))
        .outcome(
            "dropped",
            1.0,
            EQUIP_COST,
            vec![
                effect(eq_at, [sv(gear, [arg(0)])], base),
                effect(gear, [arg(0)], nil),
            ],
        )
        .build();
    let carry = b
        .action("carry", &[("g", robot), ("u", robot), ("l", site)])
        .pre(all_of([
            is(arg(0), ugv),
            is(arg(1), uav),
            eq(here(arg(0)), here(arg(1))),
            ne(here(arg(0)), arg(2)),
            ge(sv(charge, [arg(0)]), d_to(arg(0), arg(2))),
        ]))
        .outcome_with_cost(
            "carried",
            1.0,
            add(d_to(arg(0), arg(2)), CARRY_EXTRA),
            vec![
                effect(at, [arg(0)], arg(2)),
                effect(at, [arg(1)], arg(2)),
                effect(
                    charge,
                    [arg(0)],
                    sub(sv(charge, [arg(0)]), d_to(arg(0), arg(2))),
                ),
            ],
        )
        .build();
    let transfer = b
        .action("transferData", &[("from", robot), ("to", robot)])
        .pre(and(
            eq(here(arg(0)), here(arg(1))),
            le(add(sv(data, [arg(0)]), sv(data, [arg(1)])), DATA_CAPACITY),
        ))
        .outcome(
            "transferred",
            1.0,
            TRANSFER_COST,
            vec![
                effect(data, [arg(1)], add(sv(data, [arg(0)]), sv(data, [arg(1)]))),
                effect(data, [arg(0)], 0),
            ],
        )
        .build();
    let scare = b
        .action("scare", &[("r", robot), ("l", site)])
        .pre(eq(here(arg(0)), arg(1)))
        .outcome(
            "fled",
            SCARE_SUCCESS,
            SCARE_COST,
            vec![effect(animal, [arg(1)], false)],
        )
        .failure("stayed", 1.0 - SCARE_SUCCESS, SCARE_COST)
        .build();
    let wait = b
        .action("wait", &[("r", robot)])
        .outcome("waited", 1.0, WAIT_COST, vec![])
        .build();

    let go_then = |r: Expr, l: Expr, a: ActionId| {
        vec![
            if_(
                ge(sv(data, [r.clone()]), DATA_CAPACITY),
                vec![subtask(deposit_data, [r.clone()])],
                vec![],
            ),
            subtask(move_to, [r.clone(), l.clone()]),
            act(a, [r, l]),
        ]
    };

    for (name, kind) in [("survey-air", uav), ("survey-ground", ugv)] {
        let m = b
            .method(name, survey, &[("l", site), ("r", robot)])
            .pre(is(arg(1), kind));
        let (l, r) = (m.param(0), m.param(1));
        m.body(go_then(r.into(), l.into(), do_survey)).build();
    }
    let m = b.method("monitor-any", monitor, &[("l", site), ("r", robot)]);
    let (l, r) = (m.param(0), m.param(1));
    m.body(go_then(r.into(), l.into(), do_monitor)).build();

    for (task, tool, a, equipped, fetching) in [
        (
            screen,
            thermal,
            do_screen,
            "screen-equipped",
            "screen-fetch",
        ),
        (
            sample,
            sampler,
            do_sample,
            "sample-equipped",
            "sample-fetch",
        ),
    ] {
        let m = b
            .method(equipped, task, &[("l", site), ("r", robot)])
            .pre(eq(sv(gear, [arg(1)]), tool));
        let (l, r) = (m.param(0), m.param(1));
        m.body(go_then(r.into(), l.into(), a)).build();
        let m = b
            .method(fetching, task, &[("l", site), ("r", robot)])
            .pre(and(
                is(arg(1), ugv),
                eq(sv(eq_at, [Expr::from(tool)]), base),
            ));
        let (l, r) = (m.param(0), m.param(1));
        let mut body = vec![subtask(get_equipment, [r.into(), tool.into()])];
        body.extend(go_then(r.into(), l.into(), a));
        m.body(body).build();
    }

    let travel_by_type = |r: Expr, l: Expr| {
        if_(
            is(r.clone(), ugv),
            vec![act(drive, [r.clone(), l.clone()])],
            vec![act(fly, [r, l])],
        )
    };
    for (name, kind, a) in [("move-drive", ugv, drive), ("move-fly", uav, fly)] {
        let m = b
            .method(name, move_to, &[("r", robot), ("l", site)])
            .pre(and(
                is(arg(0), kind),
                ge(sv(charge, [arg(0)]), d_to(arg(0), arg(1))),
            ));
        let (r, l) = (m.param(0), m.param(1));
        m.body(vec![if_(
            ne(here(r.into()), l),
            vec![act(a, [r.into(), l.into()])],
            vec![],
        )])
        .build();
    }
    let m = b
        .method("move-recharged", move_to, &[("r", robot), ("l", site)])
        .pre(ne(here(arg(0)), arg(1)));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(recharge, [r.into()]),
        if_(
            ne(here(r.into()), l),
            vec![travel_by_type(r.into(), l.into())],
            vec![],
        ),
    ])
    .build();
    let m = b
        .method(
            "move-carried",
            move_to,
            &[("r", robot), ("l", site), ("g", robot)],
        )
        .pre(all_of([
            is(arg(0), uav),
            is(arg(2), ugv),
            ne(here(arg(0)), arg(1)),
            ge(
                sv(charge, [arg(2)]),
                add(
                    d_to(arg(2), here(arg(0))),
                    rigid(dist, [here(arg(0)), arg(1)]),
                ),
            ),
        ]));
    let (r, l, g) = (m.param(0), m.param(1), m.param(2));
    m.body(vec![
        if_(
            ne(here(g.into()), here(r.into())),
            vec![act(drive, [g.into(), here(r.into())])],
            vec![],
        ),
        act(carry, [g.into(), r.into(), l.into()]),
    ])
    .build();

    let m = b
        .method("recharge-base", recharge, &[("r", robot)])
        .pre(ge(sv(charge, [arg(0)]), d_to(arg(0), base.into())));
    let r = m.param(0);
    m.body(vec![
        if_(
            ne(here(r.into()), base),
            vec![travel_by_type(r.into(), base.into())],
            vec![],
        ),
        act(charge_up, [r.into()]),
    ])
    .build();

    let m = b
        .method(
            "get-from-base",
            get_equipment,
            &[("r", robot), ("e", equip)],
        )
        .pre(eq(sv(eq_at, [arg(1)]), base));
    let (r, e) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(move_to, [r.into(), base.into()]),
        if_(
            ne(sv(gear, [r.into()]), nil),
            vec![act(drop, [r.into()])],
            vec![],
        ),
        act(pick, [r.into(), e.into()]),
    ])
    .build();

    let m = b.method("deposit-base", deposit_data, &[("r", robot)]);
    let r = m.param(0);
    m.body(vec![
        subtask(move_to, [r.into(), base.into()]),
        act(deposit, [r.into()]),
    ])
    .build();
    let m = b
        .method("deposit-relay", deposit_data, &[("r", robot), ("g", robot)])
        .pre(and(
            ne(arg(0), arg(1)),
            le(add(sv(data, [arg(0)]), sv(data, [arg(1)])), DATA_CAPACITY),
        ));
    let (r, g) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(move_to, [g.into(), here(r.into())]),
        act(transfer, [r.into(), g.into()]),
    ])
    .build();

    let m = b.method("scare-off", handle_animal, &[("l", site), ("r", robot)]);
    let (l, r) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(move_to, [r.into(), l.into()]),
        act(scare, [r.into(), l.into()]),
    ])
    .build();
    let m = b.method("wait-out", handle_animal, &[("l", site), ("r", robot)]);
    let r = m.param(1);
    m.body(vec![act(wait, [r.into()])]).build();

    b.features(Features {
        exogenous_events: true,
        dead_ends: true,
        sensing: false,
        collaboration: true,
        parallel_tasks: true,
    });
    b.finish()
}

/// Random problem: robots with partial charge and some stored data, one to
/// three site tasks, and possibly an animal visiting a site.
pub fn generate(dom: &Domain, id: &str, seed: u64) -> Problem {
    let mut rng = SimRng::new(seed);
    let sym = |n: &str| dom.sym(n).expect("declared symbol");
    let sites: Vec<Value> = SITES.iter().map(|s| sym(s.0)).collect();
    let slot = |var: String| dom.slot_by_name(&var).expect("declared variable");
    let mut s = State::initial(dom);
    let mut set = |var: String, v: Value| s.set(dom, slot(var), v).expect("value in range");
    for e in EQUIPMENT {
        set(format!("equipAt({e})"), sites[0]);
    }
    for r in UGVS.iter().chain(UAVS.iter()) {
        let t = if UAVS.contains(r) { "UAV" } else { "UGV" };
        set(format!("robotType({r})"), sym(t));
        set(format!("loc({r})"), sites[rng.below(sites.len())]);
        let c =
            MIN_INITIAL_CHARGE + rng.below((MAX_CHARGE - MIN_INITIAL_CHARGE + 1) as usize) as i64;
        set(format!("charge({r})"), Value::Int(c));
        set(
            format!("data({r})"),
            Value::Int(rng.below(DATA_CAPACITY as usize) as i64),
        );
        set(format!("gear({r})"), sym("nil"));
    }
    let mut at_base: Vec<&str> = EQUIPMENT.to_vec();
    for g in UGVS {
        if rng.next_f64() < HELD_EQUIPMENT_PROB {
            let e = at_base.remove(rng.below(at_base.len()));
            set(format!("equipAt({e})"), sym(g));
            set(format!("gear({g})"), sym(e));
        }
    }

    let kinds: Vec<_> = ["survey", "monitor", "screen", "sample"]
        .iter()
        .map(|n| dom.task_by_name(n).expect("site task"))
        .collect();
    let n = 1 + rng.below(MAX_TASKS);
    let mut arrivals: Vec<Arrival> = (0..n)
        .map(|_| Arrival {
            tick: rng.below(ARRIVAL_SPREAD as usize) as u64,
            task: Task::new(
                kinds[rng.below(kinds.len())],
                vec![sites[1 + rng.below(sites.len() - 1)]],
            ),
        })
        .collect();
    arrivals.sort_by_key(|a| a.tick);

    let mut events = Vec::new();
    if rng.next_f64() < ANIMAL_PROB {
        let z = sites[1 + rng.below(sites.len() - 1)];
        let t = rng.below(ANIMAL_SPREAD as usize) as u64;
        let var = slot(format!("animal({})", dom.display(z)));
        let handle = dom.task_by_name("handleAnimal").expect("animal event");
        events.push(ExoEvent {
            tick: t,
            effect: ExoEffect::Mutate(vec![(var, Value::Bool(true))]),
        });
        events.push(ExoEvent {
            tick: t,
            effect: ExoEffect::Task(Task::new(handle, vec![z])),
        });
        events.push(ExoEvent {
            tick: t + ANIMAL_STAY,
            effect: ExoEffect::Mutate(vec![(var, Value::Bool(false))]),
        });
    }
    Problem {
        id: id.to_string(),
        domain: dom.name().to_string(),
        seed,
        initial: s,
        arrivals,
        events,
    }
}
