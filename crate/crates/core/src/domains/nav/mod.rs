//! Robots carry objects between rooms joined by doors. Spring doors close
//! unless held open, and a robot carrying something cannot hold one, so it
//! asks another robot for help. Door types are unknown until sensed or
//! tried. Some method always applies, so there are no dead ends.

pub mod consts;

use consts::*;

use crate::interp::ast::dsl::*;
use crate::model::{effect, Domain, DomainBuilder, DomainError, Features, State, Task, Value};
use crate::sim::{Arrival, Problem, SimRng};

/// First door on the tree path from room `a` to room `b`.
fn first_door(a: usize, b: usize) -> Option<usize> {
    let mut prev = vec![None; ROOMS.len()];
    let mut seen = vec![false; ROOMS.len()];
    let mut queue = std::collections::VecDeque::from([b]);
    seen[b] = true;
    while let Some(x) = queue.pop_front() {
        for (i, d) in DOORS.iter().enumerate() {
            let y = if d.1 == x {
                d.2
            } else if d.2 == x {
                d.1
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some(i);
                queue.push_back(y);
            }
        }
    }
    // searching from `b` makes prev[a] the door leaving `a` towards `b`
    prev[a]
}

pub fn build() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("nav");
    let (room, rooms) = b.enum_type("room", &ROOMS);
    let door_names: Vec<&str> = DOORS.iter().map(|d| d.0).collect();
    let (door, doors) = b.enum_type("door", &door_names);
    let (robot, _) = b.enum_type("robot", &ROBOTS);
    let (obj, objs) = b.enum_type("obj", &OBJECTS);
    let nil = b.sym("nil");
    let held = b.sym("held");
    let unknown = b.sym("unknown");
    let (_, kinds) = b.enum_type("kind", &["spring", "ordinary"]);
    let (spring, ordinary) = (kinds[0], kinds[1]);
    let cargo = b.add_type("cargo", [vec![nil], objs.clone()].concat());
    let opos = b.add_type("opos", [vec![held], rooms.clone()].concat());
    let belief = b.add_type("belief", vec![unknown, spring, ordinary]);
    let truth_ty = b.add_type("doorKind", vec![spring, ordinary]);
    let grip = b.add_type("grip", [vec![nil], doors.clone()].concat());

    let at = b.state_var("loc", &[robot], room);
    let load = b.state_var("load", &[robot], cargo);
    let pos = b.state_var("pos", &[obj], opos);
    let kind = b.state_var("doorType", &[door], belief);
    let truth = b.state_var("trueDoorType", &[door], truth_ty);
    let open = b.state_var("doorOpen", &[door], crate::model::BOOL);
    let holding = b.state_var("holding", &[robot], grip);

    let mut other_entries = Vec::new();
    for (i, d) in DOORS.iter().enumerate() {
        other_entries.push((vec![doors[i], rooms[d.1]], rooms[d.2]));
        other_entries.push((vec![doors[i], rooms[d.2]], rooms[d.1]));
    }
    let other = b.rigid("otherSide", &[door, room], Value::None, other_entries);
    let mut next_entries = Vec::new();
    for x in 0..ROOMS.len() {
        for y in 0..ROOMS.len() {
            if let Some(d) = first_door(x, y) {
                next_entries.push((vec![rooms[x], rooms[y]], doors[d]));
            }
        }
    }
    let next_door = b.rigid("nextDoor", &[room, room], Value::None, next_entries);

    let deliver = b.task("deliver", &[robot, obj, room]);
    let fetch = b.task("fetch", &[robot, obj]);
    let goto = b.task("goto", &[robot, room]);
    let cross = b.task("cross", &[robot, door]);
    let help = b.task("help", &[robot, door, room]);
    let identify = b.task("identify", &[robot, door]);

    let here = |r: crate::interp::Expr| sv(at, [r]);
    let beside = || ne(rigid(other, [arg(1), here(arg(0))]), none());
    let is_ordinary = || eq(sv(truth, [arg(1)]), ordinary);

    let mv = b
        .action("move", &[("r", robot), ("d", door)])
        .pre(all_of([
            beside(),
            or(sv(open, [arg(1)]), eq(sv(holding, [arg(0)]), arg(1))),
            or(
                eq(sv(holding, [arg(0)]), nil),
                eq(sv(holding, [arg(0)]), arg(1)),
            ),
        ]))
        .outcome(
            "through",
            1.0,
            MOVE_COST,
            vec![
                effect(at, [arg(0)], rigid(other, [arg(1), here(arg(0))])),
                effect(holding, [arg(0)], nil),
                effect(
                    open,
                    [arg(1)],
                    ite(
                        eq(sv(holding, [arg(0)]), arg(1)),
                        is_ordinary(),
                        sv(open, [arg(1)]),
                    ),
                ),
            ],
        )
        .build();
    let open_door = b
        .action("openDoor", &[("r", robot), ("d", door)])
        .pre(and(beside(), eq(sv(holding, [arg(0)]), nil)))
        .outcome(
            "swung",
            OPEN_SUCCESS,
            OPEN_COST,
            vec![
                effect(open, [arg(1)], is_ordinary()),
                effect(kind, [arg(1)], sv(truth, [arg(1)])),
            ],
        )
        .failure("stuck", 1.0 - OPEN_SUCCESS, OPEN_COST)
        .build();
    b.action("closeDoor", &[("r", robot), ("d", door)])
        .pre(and(beside(), sv(open, [arg(1)])))
        .outcome("shut", 1.0, CLOSE_COST, vec![effect(open, [arg(1)], false)])
        .build();
    let hold = b
        .action("holdDoor", &[("r", robot), ("d", door)])
        .pre(all_of([
            beside(),
            eq(sv(load, [arg(0)]), nil),
            eq(sv(holding, [arg(0)]), nil),
        ]))
        .outcome(
            "holding",
            1.0,
            HOLD_COST,
            vec![
                effect(holding, [arg(0)], arg(1)),
                effect(open, [arg(1)], true),
                effect(kind, [arg(1)], sv(truth, [arg(1)])),
            ],
        )
        .build();
    let release = b
        .action("releaseDoor", &[("r", robot), ("d", door)])
        .pre(eq(sv(holding, [arg(0)]), arg(1)))
        .outcome(
            "released",
            1.0,
            RELEASE_COST,
            vec![
                effect(holding, [arg(0)], nil),
                effect(open, [arg(1)], is_ordinary()),
            ],
        )
        .build();
    let pickup = b
        .action("pickup", &[("r", robot), ("o", obj)])
        .pre(all_of([
            eq(here(arg(0)), sv(pos, [arg(1)])),
            eq(sv(load, [arg(0)]), nil),
            eq(sv(holding, [arg(0)]), nil),
        ]))
        .outcome(
            "ok",
            1.0,
            PICKUP_COST,
            vec![effect(load, [arg(0)], arg(1)), effect(pos, [arg(1)], held)],
        )
        .build();
    let putdown = b
        .action("putdown", &[("r", robot), ("o", obj)])
        .pre(eq(sv(load, [arg(0)]), arg(1)))
        .outcome(
            "ok",
            1.0,
            PUTDOWN_COST,
            vec![
                effect(load, [arg(0)], nil),
                effect(pos, [arg(1)], here(arg(0))),
            ],
        )
        .build();
    let sense = b
        .action("senseDoor", &[("r", robot), ("d", door)])
        .pre(beside())
        .outcome(
            "seen",
            1.0,
            SENSE_COST,
            vec![effect(kind, [arg(1)], sv(truth, [arg(1)]))],
        )
        .build();
    let wait = b
        .action("wait", &[("r", robot)])
        .outcome("ok", 1.0, WAIT_COST, vec![])
        .build();
    let signal = b
        .action("signal", &[("r", robot), ("h", robot)])
        .outcome("heard", 1.0, SIGNAL_COST, vec![])
        .build();

    let m = b
        .method(
            "deliver-carry",
            deliver,
            &[("r", robot), ("o", obj), ("to", room)],
        )
        .pre(ne(sv(pos, [arg(1)]), held));
    let (r, o, to) = (m.param(0), m.param(1), m.param(2));
    m.body(vec![
        subtask(fetch, [r.into(), o.into()]),
        subtask(goto, [r.into(), to.into()]),
        act(putdown, [r.into(), o.into()]),
    ])
    .build();

    let m = b
        .method("fetch-pick", fetch, &[("r", robot), ("o", obj)])
        .pre(ne(sv(pos, [arg(1)]), held));
    let (r, o) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(goto, [r.into(), sv(pos, [o.into()])]),
        act(pickup, [r.into(), o.into()]),
    ])
    .build();

    let mut m = b.method("goto-route", goto, &[("r", robot), ("to", room)]);
    let (r, to) = (m.param(0), m.param(1));
    let d = m.local("d");
    m.body(vec![while_(
        ne(here(r.into()), to),
        vec![
            assign(d, rigid(next_door, [here(r.into()), to.into()])),
            subtask(cross, [r.into(), d.into()]),
        ],
    )])
    .build();

    let m = b
        .method("cross-push", cross, &[("r", robot), ("d", door)])
        .pre(or(sv(open, [arg(1)]), ne(sv(kind, [arg(1)]), spring)));
    let (r, d) = (m.param(0), m.param(1));
    m.body(vec![
        if_(
            sv(open, [d.into()]),
            vec![],
            vec![act(open_door, [r.into(), d.into()])],
        ),
        act(mv, [r.into(), d.into()]),
    ])
    .build();

    let m = b
        .method("cross-hold", cross, &[("r", robot), ("d", door)])
        .pre(eq(sv(load, [arg(0)]), nil));
    let (r, d) = (m.param(0), m.param(1));
    m.body(vec![
        act(hold, [r.into(), d.into()]),
        act(mv, [r.into(), d.into()]),
    ])
    .build();

    let m = b
        .method(
            "cross-helped",
            cross,
            &[("r", robot), ("d", door), ("h", robot)],
        )
        .pre(all_of([
            // only a loaded robot asks, so a helper never recruits another
            ne(sv(load, [arg(0)]), nil),
            ne(arg(2), arg(0)),
            eq(sv(load, [arg(2)]), nil),
            eq(sv(holding, [arg(2)]), nil),
        ]));
    let (r, d, h) = (m.param(0), m.param(1), m.param(2));
    m.body(vec![
        act(signal, [r.into(), h.into()]),
        subtask(help, [h.into(), d.into(), here(r.into())]),
        act(mv, [r.into(), d.into()]),
        act(release, [h.into(), d.into()]),
    ])
    .build();

    let m = b
        .method("cross-identify", cross, &[("r", robot), ("d", door)])
        .pre(eq(sv(kind, [arg(1)]), unknown));
    let (r, d) = (m.param(0), m.param(1));
    m.body(vec![
        subtask(identify, [r.into(), d.into()]),
        act(wait, [r.into()]),
        subtask(cross, [r.into(), d.into()]),
    ])
    .build();

    let m = b.method(
        "help-hold",
        help,
        &[("h", robot), ("d", door), ("side", room)],
    );
    let (h, d, side) = (m.param(0), m.param(1), m.param(2));
    m.body(vec![
        subtask(goto, [h.into(), side.into()]),
        act(hold, [h.into(), d.into()]),
    ])
    .build();

    let m = b.method("identify-sense", identify, &[("r", robot), ("d", door)]);
    let (r, d) = (m.param(0), m.param(1));
    m.body(vec![act(sense, [r.into(), d.into()])]).build();

    b.features(Features {
        exogenous_events: false,
        dead_ends: false,
        sensing: true,
        collaboration: true,
        parallel_tasks: true,
    });
    b.finish()
}

/// Random problem: robots and objects in random rooms, door types hidden,
/// one to three delivery tasks for distinct robots and objects.
pub fn generate(dom: &Domain, id: &str, seed: u64) -> Problem {
    let mut rng = SimRng::new(seed);
    let sym = |n: &str| dom.sym(n).expect("declared symbol");
    let rooms: Vec<Value> = ROOMS.iter().map(|r| sym(r)).collect();
    let mut s = State::initial(dom);
    let set = |s: &mut State, var: String, v: Value| {
        let slot = dom.slot_by_name(&var).expect("declared variable");
        s.set(dom, slot, v).expect("value in range");
    };
    for r in ROBOTS {
        set(&mut s, format!("loc({r})"), rooms[rng.below(rooms.len())]);
        set(&mut s, format!("load({r})"), sym("nil"));
        set(&mut s, format!("holding({r})"), sym("nil"));
    }
    let mut obj_room = Vec::new();
    for o in OBJECTS {
        let room = rng.below(rooms.len());
        obj_room.push(room);
        set(&mut s, format!("pos({o})"), rooms[room]);
    }
    for d in DOORS {
        let k = if rng.next_f64() < SPRING_PROB {
            "spring"
        } else {
            "ordinary"
        };
        set(&mut s, format!("trueDoorType({})", d.0), sym(k));
        set(&mut s, format!("doorType({})", d.0), sym("unknown"));
    }
    let deliver = dom.task_by_name("deliver").expect("deliver task");
    let n = 1 + rng.below(MAX_TASKS);
    let mut robots: Vec<usize> = (0..ROBOTS.len()).collect();
    let mut objs: Vec<usize> = (0..OBJECTS.len()).collect();
    let mut arrivals = Vec::with_capacity(n);
    for _ in 0..n {
        let r = robots.remove(rng.below(robots.len()));
        let o = objs.remove(rng.below(objs.len()));
        let mut to = rng.below(rooms.len() - 1);
        if to >= obj_room[o] {
            to += 1;
        }
        arrivals.push(Arrival {
            tick: rng.below(ARRIVAL_SPREAD as usize) as u64,
            task: Task::new(deliver, vec![sym(ROBOTS[r]), sym(OBJECTS[o]), rooms[to]]),
        });
    }
    arrivals.sort_by_key(|a| a.tick);
    Problem {
        id: id.to_string(),
        domain: dom.name().to_string(),
        seed,
        initial: s,
        arrivals,
        events: Vec::new(),
    }
}
