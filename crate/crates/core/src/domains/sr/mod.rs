//! Search and rescue in a partially mapped area. UAVs survey zones with
//! their cameras; a detected person is rescued directly when the UAV
//! carries supplies, otherwise an alarm raises a rescue event for the
//! closest free UGV, which first gets supplies. Storms ground UAVs and
//! debris blocks roads.

pub mod consts;

use consts::*;

use crate::interp::ast::dsl::*;
use crate::interp::Expr;
use crate::model::{
    effect, Domain, DomainBuilder, DomainError, Features, State, Task, Value, BOOL,
};
use crate::sim::{Arrival, ExoEffect, ExoEvent, Problem, SimRng};

pub fn build() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("sr");
    let zone_names: Vec<&str> = ZONES.iter().map(|z| z.0).collect();
    let (zone, zones) = b.enum_type("zone", &zone_names);
    let robot_names: Vec<&str> = UAVS.iter().chain(UGVS.iter()).copied().collect();
    let (robot, robots) = b.enum_type("robot", &robot_names);
    let base_entity = b.sym("BASE");
    let entity = b.add_type("entity", [robots.clone(), vec![base_entity]].concat());
    let (camera, cams) = b.enum_type("camera", &CAMERAS);
    let (rtype, rtypes) = b.enum_type("rtype", &["UAV", "UGV"]);
    let (uav, ugv) = (rtypes[0], rtypes[1]);
    let (status_ty, st) = b.enum_type(
        "status",
        &["unknown", "clear", "found", "alarmed", "rescued"],
    );
    let (weather_ty, w) = b.enum_type("weather", &["fair", "storm"]);
    let (unknown, clear, found, alarmed, rescued) = (st[0], st[1], st[2], st[3], st[4]);
    let _ = unknown;
    let (fair, _) = (w[0], w[1]);

    let robot_type = b.state_var("robotType", &[robot], rtype);
    let has_supply = b.state_var("hasSupply", &[robot], BOOL);
    let has_medicine = b.state_var("hasMedicine", &[robot], BOOL);
    let loc = b.state_var("loc", &[entity], zone);
    let flying = b.state_var("flying", &[robot], BOOL);
    let detected = b.state_var("detected", &[robot], BOOL);
    let busy = b.state_var("busy", &[robot], BOOL);
    // hidden ground truth revealed by cameras
    let person = b.state_var("person", &[zone], BOOL);
    let status = b.state_var("status", &[zone], status_ty);
    let weather = b.state_var("weather", &[zone], weather_ty);
    let debris = b.state_var("debris", &[zone], BOOL);

    let mut adj = Vec::new();
    let mut dist_table = Vec::new();
    for (i, a) in ZONES.iter().enumerate() {
        for (j, c) in ZONES.iter().enumerate() {
            let (dx, dy) = ((a.1 - c.1) as f64, (a.2 - c.2) as f64);
            let d = (dx * dx + dy * dy).sqrt().ceil() as i64;
            dist_table.push((vec![zones[i], zones[j]], Value::Int(d)));
            if (a.1 - c.1).abs() + (a.2 - c.2).abs() == 1 {
                adj.push((vec![zones[i], zones[j]], Value::Bool(true)));
            }
        }
    }
    let adjacent = b.rigid("adjacent", &[zone, zone], Value::Bool(false), adj);
    let distance = b.rigid("distance", &[zone, zone], Value::Int(0), dist_table);
    let sym = |b: &mut DomainBuilder, n: &str| b.sym(n);
    let mounts: Vec<(Vec<Value>, Value)> = MOUNTS
        .iter()
        .map(|(r, c)| (vec![sym(&mut b, r), sym(&mut b, c)], Value::Bool(true)))
        .collect();
    let has_camera = b.rigid("hasCamera", &[robot, camera], Value::Bool(false), mounts);
    let _ = cams;

    let survey = b.task("survey", &[robot, zone]);
    let move_to = b.task("moveTo", &[robot, zone]);
    let rescue = b.task("rescue", &[robot, zone]);
    let get_supplies = b.task("GetSupplies", &[robot]);
    let aid = b.task("aid", &[robot, zone]);
    let handle_alarm = b.event("handleAlarm", &[zone]);
    let clear_path = b.task("clearPath", &[robot, zone]);
    let storm = b.event("storm", &[zone]);

    let here = |r: Expr| sv(loc, [r]);
    let dist = |a: Expr, c: Expr| rigid(distance, [a, c]);
    let is = |r: Expr, t: Value| eq(sv(robot_type, [r]), t);
    let base_loc = || sv(loc, [Expr::from(base_entity)]);

    let detect = b
        .action("DetectPerson", &[("r", robot), ("cam", camera)])
        .pre(rigid(has_camera, [arg(0), arg(1)]))
        .outcome(
            "looked",
            1.0,
            DETECT_COST,
            vec![
                effect(
                    detected,
                    [arg(0)],
                    and(
                        sv(person, [here(arg(0))]),
                        and(
                            ne(sv(status, [here(arg(0))]), alarmed),
                            ne(sv(status, [here(arg(0))]), rescued),
                        ),
                    ),
                ),
                effect(
                    status,
                    [here(arg(0))],
                    ite(
                        or(
                            eq(sv(status, [here(arg(0))]), alarmed),
                            eq(sv(status, [here(arg(0))]), rescued),
                        ),
                        sv(status, [here(arg(0))]),
                        ite(sv(person, [here(arg(0))]), found, clear),
                    ),
                ),
            ],
        )
        .build();
    let alarm = b
        .action("TriggerAlarm", &[("r", robot), ("l", zone)])
        .outcome(
            "raised",
            1.0,
            ALARM_COST,
            vec![effect(status, [arg(1)], alarmed)],
        )
        .emits(handle_alarm, [arg(1)])
        .build();
    let drop = b
        .action("DropSupply", &[("r", robot), ("l", zone)])
        .pre(and(eq(here(arg(0)), arg(1)), sv(has_supply, [arg(0)])))
        .outcome(
            "dropped",
            1.0,
            DROP_COST,
            vec![
                effect(has_supply, [arg(0)], false),
                effect(status, [arg(1)], rescued),
                effect(busy, [arg(0)], false),
            ],
        )
        .build();
    let load = b
        .action("LoadSupply", &[("r", robot), ("l", zone)])
        .pre(and(eq(here(arg(0)), arg(1)), eq(arg(1), base_loc())))
        .outcome(
            "loaded",
            1.0,
            LOAD_COST,
            vec![effect(has_supply, [arg(0)], true)],
        )
        .build();
    let takeoff = b
        .action("Takeoff", &[("r", robot), ("l", zone)])
        .pre(all_of([
            is(arg(0), uav),
            not(sv(flying, [arg(0)])),
            eq(here(arg(0)), arg(1)),
            eq(sv(weather, [arg(1)]), fair),
        ]))
        .outcome(
            "airborne",
            1.0,
            TAKEOFF_COST,
            vec![effect(flying, [arg(0)], true)],
        )
        .build();
    let land = b
        .action("Land", &[("r", robot), ("l", zone)])
        .pre(and(sv(flying, [arg(0)]), eq(here(arg(0)), arg(1))))
        .outcome(
            "landed",
            1.0,
            LAND_COST,
            vec![effect(flying, [arg(0)], false)],
        )
        .build();
    let drive = b
        .action("MoveTo", &[("r", robot), ("l", zone)])
        .pre(all_of([
            is(arg(0), ugv),
            ne(here(arg(0)), arg(1)),
            not(sv(debris, [arg(1)])),
        ]))
        .outcome_with_cost(
            "arrived",
            DRIVE_SUCCESS,
            mul(DRIVE_FACTOR, dist(here(arg(0)), arg(1))),
            vec![effect(loc, [arg(0)], arg(1))],
        )
        .failure("stuck", 1.0 - DRIVE_SUCCESS, DRIVE_FACTOR as f64)
        .build();
    let fly = b
        .action("FlyTo", &[("r", robot), ("l", zone)])
        .pre(all_of([
            sv(flying, [arg(0)]),
            ne(here(arg(0)), arg(1)),
            eq(sv(weather, [arg(1)]), fair),
        ]))
        .outcome_with_cost(
            "arrived",
            FLY_SUCCESS,
            dist(here(arg(0)), arg(1)),
            vec![effect(loc, [arg(0)], arg(1))],
        )
        .failure("gust", 1.0 - FLY_SUCCESS, 1.0)
        .build();
    let replenish = b
        .action("ReplenishSupplies", &[("r", robot)])
        .pre(eq(here(arg(0)), base_loc()))
        .outcome(
            "stocked",
            1.0,
            REPLENISH_COST,
            vec![effect(has_supply, [arg(0)], true)],
        )
        .build();
    let transfer = b
        .action("Transfer", &[("from", robot), ("to", robot)])
        .pre(and(
            eq(here(arg(0)), here(arg(1))),
            sv(has_medicine, [arg(0)]),
        ))
        .outcome(
            "handed",
            1.0,
            TRANSFER_COST,
            vec![
                effect(has_medicine, [arg(0)], false),
                effect(has_supply, [arg(1)], true),
            ],
        )
        .build();
    let clear_debris = b
        .action("ClearDebris", &[("r", robot), ("l", zone)])
        .pre(is(arg(0), ugv))
        .outcome(
            "cleared",
            CLEAR_SUCCESS,
            CLEAR_COST,
            vec![effect(debris, [arg(1)], false)],
        )
        .failure("too-heavy", 1.0 - CLEAR_SUCCESS, CLEAR_COST)
        .build();
    let medicine = b
        .action("GiveMedicine", &[("r", robot), ("l", zone)])
        .pre(and(eq(here(arg(0)), arg(1)), sv(has_medicine, [arg(0)])))
        .outcome(
            "treated",
            1.0,
            MEDICINE_COST,
            vec![
                effect(has_medicine, [arg(0)], false),
                effect(status, [arg(1)], rescued),
                effect(busy, [arg(0)], false),
            ],
        )
        .build();
    let dispatch = b
        .action("Dispatch", &[("r", robot), ("l", zone)])
        .outcome(
            "assigned",
            1.0,
            DISPATCH_COST,
            vec![effect(busy, [arg(0)], true)],
        )
        .build();
    let wait = b
        .action("Wait", &[("r", robot)])
        .outcome("waited", 1.0, WAIT_COST, vec![])
        .build();

    // survey
    let mut m = b
        .method("m1-survey", survey, &[("r", robot), ("l", zone)])
        .pre(and(is(arg(0), uav), eq(here(arg(0)), arg(1))));
    let (r, l) = (m.param(0), m.param(1));
    let l2 = m.local("l'");
    let cam = m.local("cam");
    let x = m.local("x");
    let c = m.local("c");
    m.body(vec![for_in(
        l2,
        filter(x, all(zone), rigid(adjacent, [l.into(), x.into()])),
        vec![
            subtask(move_to, [r.into(), l2.into()]),
            for_in(
                cam,
                filter(c, all(camera), rigid(has_camera, [r.into(), c.into()])),
                vec![
                    act(detect, [r.into(), cam.into()]),
                    if_(
                        sv(detected, [r.into()]),
                        vec![if_(
                            sv(has_supply, [r.into()]),
                            vec![subtask(rescue, [r.into(), l2.into()])],
                            vec![act(alarm, [r.into(), l2.into()])],
                        )],
                        vec![],
                    ),
                ],
            ),
        ],
    )])
    .build();

    let m = b
        .method("m2-survey", survey, &[("r", robot), ("l", zone)])
        .pre(and(
            is(arg(0), uav),
            or(ne(here(arg(0)), arg(1)), not(sv(has_supply, [arg(0)]))),
        ));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![
        if_(
            sv(has_supply, [r.into()]),
            vec![],
            vec![
                subtask(move_to, [r.into(), base_loc()]),
                act(load, [r.into(), base_loc()]),
            ],
        ),
        subtask(move_to, [r.into(), l.into()]),
        subtask(survey, [r.into(), l.into()]),
    ])
    .build();

    // moveTo
    let m = b
        .method("m-fly", move_to, &[("r", robot), ("l", zone)])
        .pre(is(arg(0), uav));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![if_(
        ne(here(r.into()), l),
        vec![
            if_(
                sv(flying, [r.into()]),
                vec![],
                vec![act(takeoff, [r.into(), here(r.into())])],
            ),
            act(fly, [r.into(), l.into()]),
        ],
        vec![],
    )])
    .build();
    let m = b
        .method("m-drive", move_to, &[("r", robot), ("l", zone)])
        .pre(is(arg(0), ugv));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![if_(
        ne(here(r.into()), l),
        vec![act(drive, [r.into(), l.into()])],
        vec![],
    )])
    .build();
    let m = b
        .method("m-drive-clear", move_to, &[("r", robot), ("l", zone)])
        .pre(and(is(arg(0), ugv), sv(debris, [arg(1)])));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(clear_path, [r.into(), l.into()]),
        if_(
            ne(here(r.into()), l),
            vec![act(drive, [r.into(), l.into()])],
            vec![],
        ),
    ])
    .build();

    // rescue
    let m = b
        .method("m-rescue-supplied", rescue, &[("r", robot), ("l", zone)])
        .pre(or(sv(has_supply, [arg(0)]), sv(has_medicine, [arg(0)])));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(move_to, [r.into(), l.into()]),
        subtask(aid, [r.into(), l.into()]),
    ])
    .build();
    let m = b
        .method("m-rescue-resupply", rescue, &[("r", robot), ("l", zone)])
        .pre(is(arg(0), ugv));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(get_supplies, [r.into()]),
        subtask(move_to, [r.into(), l.into()]),
        subtask(aid, [r.into(), l.into()]),
    ])
    .build();

    // restock at base, or take supplies from the nearest robot holding some
    let m = b
        .method("m1-GetSupplies", get_supplies, &[("r", robot)])
        .pre(is(arg(0), ugv));
    let r = m.param(0);
    m.body(vec![
        subtask(move_to, [r.into(), base_loc()]),
        act(replenish, [r.into()]),
    ])
    .build();
    let mut m = b
        .method("m2-GetSupplies", get_supplies, &[("r", robot)])
        .pre(is(arg(0), ugv));
    let r = m.param(0);
    let r2 = m.local("r2");
    let rp = m.local("r'");
    m.body(vec![
        assign(
            r2,
            argmin(
                rp,
                filter(rp, all(robot), sv(has_medicine, [rp.into()])),
                dist(here(r.into()), here(rp.into())),
            ),
        ),
        if_(
            eq(r2, none()),
            vec![fail()],
            vec![
                subtask(move_to, [r.into(), here(r2.into())]),
                act(transfer, [r2.into(), r.into()]),
            ],
        ),
    ])
    .build();

    // aid
    let m = b
        .method("m-aid-drop", aid, &[("r", robot), ("l", zone)])
        .pre(sv(has_supply, [arg(0)]));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![act(drop, [r.into(), l.into()])]).build();
    let m = b
        .method("m-aid-medicine", aid, &[("r", robot), ("l", zone)])
        .pre(sv(has_medicine, [arg(0)]));
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![act(medicine, [r.into(), l.into()])]).build();

    // handleAlarm: the closest UGV not already on a rescue
    let mut m = b.method("m-alarm-closest", handle_alarm, &[("l", zone)]);
    let l = m.param(0);
    let u = m.local("u");
    let x = m.local("x");
    m.body(vec![
        assign(
            u,
            argmin(
                x,
                filter(
                    x,
                    all(robot),
                    and(is(x.into(), ugv), not(sv(busy, [x.into()]))),
                ),
                dist(here(x.into()), l.into()),
            ),
        ),
        if_(eq(u, none()), vec![fail()], vec![]),
        act(dispatch, [u.into(), l.into()]),
        subtask(rescue, [u.into(), l.into()]),
    ])
    .build();
    let m = b
        .method("m-alarm-any", handle_alarm, &[("l", zone), ("u", robot)])
        .pre(is(arg(1), ugv));
    let (l, u) = (m.param(0), m.param(1));
    m.body(vec![
        act(dispatch, [u.into(), l.into()]),
        subtask(rescue, [u.into(), l.into()]),
    ])
    .build();

    // clearPath
    let m = b.method("m-clear", clear_path, &[("r", robot), ("l", zone)]);
    let (r, l) = (m.param(0), m.param(1));
    m.body(vec![act(clear_debris, [r.into(), l.into()])])
        .build();

    // storm
    let m = b
        .method("m-storm-land", storm, &[("l", zone), ("r", robot)])
        .pre(and(sv(flying, [arg(1)]), eq(here(arg(1)), arg(0))));
    let (l, r) = (m.param(0), m.param(1));
    m.body(vec![act(land, [r.into(), l.into()])]).build();
    let m = b
        .method("m-storm-wait", storm, &[("l", zone), ("r", robot)])
        .pre(is(arg(1), uav));
    let r = m.param(1);
    m.body(vec![act(wait, [r.into()])]).build();

    let _ = found;
    b.features(Features {
        exogenous_events: true,
        dead_ends: true,
        sensing: true,
        collaboration: true,
        parallel_tasks: true,
    });
    b.finish()
}

/// Random problem: hidden people, scattered supplies and medicine, one to
/// three survey tasks, and possibly a storm and debris.
pub fn generate(dom: &Domain, id: &str, seed: u64) -> Problem {
    let mut rng = SimRng::new(seed);
    let sym = |n: &str| dom.sym(n).expect("declared symbol");
    let zones: Vec<Value> = ZONES.iter().map(|z| sym(z.0)).collect();
    let slot = |var: String| dom.slot_by_name(&var).expect("declared variable");
    let mut s = State::initial(dom);
    let mut set = |var: String, v: Value| s.set(dom, slot(var), v).expect("value in range");
    set("loc(BASE)".into(), zones[0]);
    for r in UAVS.iter().chain(UGVS.iter()) {
        let t = if UAVS.contains(r) { "UAV" } else { "UGV" };
        set(format!("robotType({r})"), sym(t));
        set(format!("loc({r})"), zones[rng.below(zones.len())]);
        set(
            format!("hasSupply({r})"),
            Value::Bool(rng.next_f64() < SUPPLY_PROB),
        );
        set(
            format!("hasMedicine({r})"),
            Value::Bool(rng.next_f64() < MEDICINE_PROB),
        );
    }
    for z in &ZONES[1..] {
        set(
            format!("person({})", z.0),
            Value::Bool(rng.next_f64() < PERSON_PROB),
        );
    }

    let survey = dom.task_by_name("survey").expect("survey task");
    let n = 1 + rng.below(MAX_TASKS);
    let mut arrivals: Vec<Arrival> = (0..n)
        .map(|_| Arrival {
            tick: rng.below(ARRIVAL_SPREAD as usize) as u64,
            task: Task::new(
                survey,
                vec![
                    sym(UAVS[rng.below(UAVS.len())]),
                    zones[rng.below(zones.len())],
                ],
            ),
        })
        .collect();
    arrivals.sort_by_key(|a| a.tick);

    let mut events = Vec::new();
    if rng.next_f64() < STORM_PROB {
        let z = zones[1 + rng.below(zones.len() - 1)];
        let t = rng.below(STORM_SPREAD as usize) as u64;
        let var = slot(format!("weather({})", dom.display(z)));
        let storm = dom.task_by_name("storm").expect("storm event");
        events.push(ExoEvent {
            tick: t,
            effect: ExoEffect::Mutate(vec![(var, sym("storm"))]),
        });
        events.push(ExoEvent {
            tick: t,
            effect: ExoEffect::Task(Task::new(storm, vec![z])),
        });
        events.push(ExoEvent {
            tick: t + STORM_LENGTH,
            effect: ExoEffect::Mutate(vec![(var, sym("fair"))]),
        });
    }
    if rng.next_f64() < DEBRIS_PROB {
        let z = zones[rng.below(zones.len())];
        events.push(ExoEvent {
            tick: rng.below(DEBRIS_SPREAD as usize) as u64,
            effect: ExoEffect::Mutate(vec![(
                slot(format!("debris({})", dom.display(z))),
                Value::Bool(true),
            )]),
        });
    }
    events.sort_by_key(|e| e.tick);
    Problem {
        id: id.to_string(),
        domain: dom.name().to_string(),
        seed,
        initial: s,
        arrivals,
        events,
    }
}
