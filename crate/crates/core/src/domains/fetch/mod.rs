//! Robots search a small grid for objects, bring them to the base and keep
//! themselves charged. Object locations are unknown until sensed; a robot
//! that runs flat away from the charger is stuck. Emergencies arrive as
//! exogenous events.

pub mod consts;

use consts::*;

use crate::interp::ast::dsl::*;
use crate::interp::Expr;
use crate::model::{effect, Domain, DomainBuilder, DomainError, Features, State, Task, Value};
use crate::sim::{Arrival, ExoEffect, ExoEvent, Problem, SimRng};

pub fn build() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("fetch");
    let loc_names: Vec<&str> = LOCATIONS.iter().map(|l| l.0).collect();
    let (loc, locs) = b.enum_type("loc", &loc_names);
    let (robot, robots) = b.enum_type("robot", &ROBOTS);
    let (obj, objs) = b.enum_type("obj", &OBJECTS);
    let nil = b.sym("nil");
    let unknown = b.sym("unknown");
    let held = b.sym("held");
    let cargo = b.add_type("cargo", [vec![nil], objs.clone()].concat());
    let opos = b.add_type("opos", [vec![unknown, held], locs.clone()].concat());
    let cpos_ty = b.add_type("cpos", [locs.clone(), robots.clone()].concat());
    let level = b.int_type("level", 0, MAX_CHARGE);
    let base = locs[0];

    let at = b.state_var("loc", &[robot], loc);
    let charge = b.state_var("charge", &[robot], level);
    let load = b.state_var("load", &[robot], cargo);
    let pos = b.state_var("pos", &[obj], opos);
    // hidden ground truth revealed by sensing
    let truth = b.state_var("truePos", &[obj], loc);
    let seen = b.state_var("seen", &[loc], crate::model::BOOL);
    let cpos = b.state_var("chargerAt", &[], cpos_ty);

    let mut table = Vec::new();
    for (i, a) in LOCATIONS.iter().enumerate() {
        for (j, c) in LOCATIONS.iter().enumerate() {
            let d = (a.1 - c.1).abs() + (a.2 - c.2).abs();
            table.push((vec![locs[i], locs[j]], Value::Int(d)));
        }
    }
    let dist = b.rigid("dist", &[loc, loc], Value::Int(0), table);

    let fetch = b.task("fetch", &[robot, obj]);
    let search = b.task("search", &[robot, obj]);
    let check = b.task("check", &[robot]);
    let goto = b.task("goto", &[robot, loc]);
    let recharge = b.task("recharge", &[robot]);
    let deliver = b.task("deliver", &[robot]);
    let emergency = b.event("emergency", &[loc]);

    let here = |r: Expr| sv(at, [r]);
    let d_to = |r: Expr, l: Expr| rigid(dist, [sv(at, [r]), l]);

    let move_cost = || {
        add(
            d_to(arg(0), arg(1)),
            ite(eq(sv(cpos, []), arg(0)), d_to(arg(0), arg(1)), 0),
        )
    };
    let mv = b
        .action("move", &[("r", robot), ("l", loc)])
        .pre(and(
            ne(here(arg(0)), arg(1)),
            ge(sv(charge, [arg(0)]), d_to(arg(0), arg(1))),
        ))
        .duration(MOVE_DURATION)
        .outcome_with_cost(
            "arrived",
            MOVE_ON_TIME,
            move_cost(),
            vec![
                effect(at, [arg(0)], arg(1)),
                effect(
                    charge,
                    [arg(0)],
                    sub(sv(charge, [arg(0)]), d_to(arg(0), arg(1))),
                ),
            ],
        )
        .outcome_with_cost(
            "detour",
            1.0 - MOVE_ON_TIME,
            add(move_cost(), MOVE_DETOUR_COST),
            vec![
                effect(at, [arg(0)], arg(1)),
                effect(
                    charge,
                    [arg(0)],
                    sub(sv(charge, [arg(0)]), d_to(arg(0), arg(1))),
                ),
            ],
        )
        .build();

    let reveal = |objs: &[Value]| -> Vec<crate::model::Effect> {
        let mut effects: Vec<_> = objs
            .iter()
            .map(|o| {
                let o = Expr::from(*o);
                effect(
                    pos,
                    [o.clone()],
                    ite(
                        and(
                            eq(sv(pos, [o.clone()]), unknown),
                            eq(sv(truth, [o.clone()]), here(arg(0))),
                        ),
                        here(arg(0)),
                        sv(pos, [o]),
                    ),
                )
            })
            .collect();
        effects.push(effect(seen, [here(arg(0))], true));
        effects
    };
    let perceive = b
        .action("perceive", &[("r", robot)])
        .outcome("looked", 1.0, PERCEIVE_COST, reveal(&objs))
        .build();
    let scan = b
        .action("scan", &[("r", robot)])
        .outcome("looked", SCAN_SUCCESS, SCAN_COST, reveal(&objs))
        .failure("blurred", 1.0 - SCAN_SUCCESS, SCAN_COST)
        .build();
    let take = b
        .action("take", &[("r", robot), ("o", obj)])
        .pre(and(
            eq(here(arg(0)), sv(pos, [arg(1)])),
            eq(sv(load, [arg(0)]), nil),
        ))
        .outcome(
            "ok",
            1.0,
            TAKE_COST,
            vec![effect(load, [arg(0)], arg(1)), effect(pos, [arg(1)], held)],
        )
        .build();
    let mut put_effects: Vec<_> = objs
        .iter()
        .map(|o| {
            let o = Expr::from(*o);
            effect(
                pos,
                [o.clone()],
                ite(
                    eq(sv(load, [arg(0)]), o.clone()),
                    here(arg(0)),
                    sv(pos, [o]),
                ),
            )
        })
        .collect();
    put_effects.push(effect(load, [arg(0)], nil));
    let put = b
        .action("put", &[("r", robot)])
        .pre(ne(sv(load, [arg(0)]), nil))
        .outcome("ok", 1.0, PUT_COST, put_effects)
        .build();
    let charge_up = b
        .action("charge", &[("r", robot)])
        .pre(or(eq(sv(cpos, []), arg(0)), eq(sv(cpos, []), here(arg(0)))))
        .outcome(
            "full",
            CHARGE_SUCCESS,
            CHARGE_COST,
            vec![effect(charge, [arg(0)], MAX_CHARGE)],
        )
        .failure("fault", 1.0 - CHARGE_SUCCESS, CHARGE_COST)
        .build();
    let take_charger = b
        .action("takeCharger", &[("r", robot)])
        .pre(eq(sv(cpos, []), here(arg(0))))
        .outcome(
            "ok",
            1.0,
            CHARGER_HANDLING_COST,
            vec![effect(cpos, [], arg(0))],
        )
        .build();
    let drop_charger = b
        .action("dropCharger", &[("r", robot)])
        .pre(eq(sv(cpos, []), arg(0)))
        .outcome(
            "ok",
            1.0,
            CHARGER_HANDLING_COST,
            vec![effect(cpos, [], here(arg(0)))],
        )
        .build();
    let address = b
        .action("address", &[("r", robot), ("l", loc)])
        .pre(eq(here(arg(0)), arg(1)))
        .outcome("handled", ADDRESS_SUCCESS, ADDRESS_COST, vec![])
        .failure("unresolved", 1.0 - ADDRESS_SUCCESS, ADDRESS_COST)
        .build();

    let m = b
        .method("fetch-and-bring", fetch, &[("r", robot), ("o", obj)])
        .pre(ne(sv(pos, [arg(1)]), held));
    let (r, o) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(search, [r.into(), o.into()]),
        subtask(goto, [r.into(), sv(pos, [o.into()])]),
        act(take, [r.into(), o.into()]),
        subtask(deliver, [r.into()]),
    ])
    .build();

    let mut m = b.method("search-nearest", search, &[("r", robot), ("o", obj)]);
    let (r, o) = (m.param(0), m.param(1));
    let next = m.local("next");
    let x = m.local("x");
    m.body(vec![while_(
        eq(sv(pos, [o.into()]), unknown),
        vec![
            assign(
                next,
                argmin(
                    x,
                    filter(x, all(loc), not(sv(seen, [x.into()]))),
                    d_to(r.into(), x.into()),
                ),
            ),
            if_(eq(next, none()), vec![fail()], vec![]),
            subtask(goto, [r.into(), next.into()]),
            subtask(check, [r.into()]),
        ],
    )])
    .build();

    for (name, a) in [("check-scan", scan), ("check-perceive", perceive)] {
        let m = b.method(name, check, &[("r", robot)]);
        let r = m.param(0);
        m.body(vec![act(a, [r.into()])]).build();
    }

    let m = b
        .method("goto-direct", goto, &[("r", robot), ("l", loc)])
        .pre(ge(sv(charge, [arg(0)]), d_to(arg(0), arg(1))));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![if_(
        ne(here(r.into()), l),
        vec![act(mv, [r.into(), l.into()])],
        vec![],
    )])
    .build();
    let m = b
        .method("goto-recharged", goto, &[("r", robot), ("l", loc)])
        .pre(ne(here(arg(0)), arg(1)));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(recharge, [r.into()]),
        act(mv, [r.into(), l.into()]),
    ])
    .build();

    let dock_reachable = || {
        and(
            member(sv(cpos, []), all(loc)),
            ge(
                sv(charge, [arg(0)]),
                rigid(dist, [here(arg(0)), sv(cpos, [])]),
            ),
        )
    };
    // another robot may have picked the charger up since selection
    let walk_to_dock = |r: Expr| {
        if_(
            member(sv(cpos, []), all(loc)),
            vec![if_(
                ne(sv(cpos, []), here(r.clone())),
                vec![act(mv, [r, sv(cpos, [])])],
                vec![],
            )],
            vec![fail()],
        )
    };
    let m = b
        .method("recharge-dock", recharge, &[("r", robot)])
        .pre(or(eq(sv(cpos, []), arg(0)), dock_reachable()));
    let r = m.param(0);
    m.body(vec![
        if_(ne(sv(cpos, []), r), vec![walk_to_dock(r.into())], vec![]),
        act(charge_up, [r.into()]),
    ])
    .build();
    let m = b
        .method("recharge-carry", recharge, &[("r", robot)])
        .pre(dock_reachable());
    let r = m.param(0);
    m.body(vec![
        walk_to_dock(r.into()),
        act(charge_up, [r.into()]),
        act(take_charger, [r.into()]),
    ])
    .build();

    let m = b.method("deliver-base", deliver, &[("r", robot)]);
    let r = m.param(0);
    m.body(vec![
        subtask(goto, [r.into(), base.into()]),
        act(put, [r.into()]),
        if_(
            eq(sv(cpos, []), r),
            vec![act(drop_charger, [r.into()])],
            vec![],
        ),
    ])
    .build();

    let m = b.method("respond", emergency, &[("l", loc), ("r", robot)]);
    let (l, r) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(goto, [r.into(), l.into()]),
        act(address, [r.into(), l.into()]),
    ])
    .build();

    b.features(Features {
        exogenous_events: true,
        dead_ends: true,
        sensing: true,
        collaboration: false,
        parallel_tasks: true,
    });
    b.finish()
}

/// Random problem: robots with partial charge, hidden object locations,
/// one to three fetch tasks and possibly an emergency.
pub fn generate(dom: &Domain, id: &str, seed: u64) -> Problem {
    let mut rng = SimRng::new(seed);
    let sym = |n: &str| dom.sym(n).expect("declared symbol");
    let locs: Vec<Value> = LOCATIONS.iter().map(|l| sym(l.0)).collect();
    let mut s = State::initial(dom);
    let set = |s: &mut State, var: String, v: Value| {
        let slot = dom.slot_by_name(&var).expect("declared variable");
        s.set(dom, slot, v).expect("value in range");
    };
    for r in ROBOTS {
        set(&mut s, format!("loc({r})"), locs[rng.below(locs.len())]);
        let c =
            MIN_INITIAL_CHARGE + rng.below((MAX_CHARGE - MIN_INITIAL_CHARGE + 1) as usize) as i64;
        set(&mut s, format!("charge({r})"), Value::Int(c));
        set(&mut s, format!("load({r})"), sym("nil"));
    }
    for o in OBJECTS {
        let l = locs[1 + rng.below(locs.len() - 1)];
        set(&mut s, format!("truePos({o})"), l);
        let known = rng.next_f64() < KNOWN_OBJECT_PROB;
        set(
            &mut s,
            format!("pos({o})"),
            if known { l } else { sym("unknown") },
        );
    }
    let charger = if rng.next_f64() < CHARGER_AT_BASE_PROB {
        sym(BASE)
    } else {
        locs[rng.below(locs.len())]
    };
    set(&mut s, "chargerAt()".into(), charger);

    let fetch = dom.task_by_name("fetch").expect("fetch task");
    let n = 1 + rng.below(MAX_TASKS);
    let mut objs: Vec<&str> = OBJECTS.to_vec();
    let mut arrivals = Vec::with_capacity(n);
    let first = rng.below(ROBOTS.len());
    for i in 0..n {
        let o = objs.remove(rng.below(objs.len()));
        let r = ROBOTS[(first + i) % ROBOTS.len()];
        arrivals.push(Arrival {
            tick: rng.below(ARRIVAL_SPREAD as usize) as u64,
            task: Task::new(fetch, vec![sym(r), sym(o)]),
        });
    }
    arrivals.sort_by_key(|a| a.tick);
    let mut events = Vec::new();
    if rng.next_f64() < EMERGENCY_PROB {
        let emergency = dom.task_by_name("emergency").expect("emergency event");
        events.push(ExoEvent {
            tick: rng.below(EMERGENCY_SPREAD as usize) as u64,
            effect: ExoEffect::Task(Task::new(emergency, vec![locs[rng.below(locs.len())]])),
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
