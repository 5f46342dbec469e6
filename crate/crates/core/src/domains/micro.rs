//! Small fixture domains. The `micro-1`..`micro-5` family is small enough to
//! enumerate every outcome tree exactly.

use crate::interp::ast::dsl::*;
use crate::model::{effect, Domain, DomainBuilder, DomainError, Value};

/// Two methods: a sure cost-2 action against a 60% cost-1 gamble.
pub fn micro1() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-1");
    let t = b.task("t", &[]);
    let sure = b
        .action("sure", &[])
        .outcome("ok", 1.0, 2.0, vec![])
        .build();
    let gamble = b
        .action("gamble", &[])
        .outcome("ok", 0.6, 1.0, vec![])
        .failure("lost", 0.4, 1.0)
        .build();
    b.method("mA", t, &[]).body(vec![act(sure, [])]).build();
    b.method("mB", t, &[]).body(vec![act(gamble, [])]).build();
    b.finish()
}

/// Three single-level methods, one of them a two-action sequence.
pub fn micro2() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-2");
    let t = b.task("t", &[]);
    let step = b
        .action("step", &[])
        .outcome("ok", 1.0, 1.0, vec![])
        .build();
    let coin = b
        .action("coin", &[])
        .outcome("heads", 0.5, 1.0, vec![])
        .outcome("tails", 0.5, 3.0, vec![])
        .build();
    let slow = b
        .action("slow", &[])
        .outcome("ok", 1.0, 3.0, vec![])
        .build();
    let risky = b
        .action("risky", &[])
        .outcome("ok", 0.8, 2.0, vec![])
        .failure("broke", 0.2, 2.0)
        .build();
    b.method("mA", t, &[])
        .body(vec![act(step, []), act(coin, [])])
        .build();
    b.method("mB", t, &[]).body(vec![act(slow, [])]).build();
    b.method("mC", t, &[]).body(vec![act(risky, [])]).build();
    b.finish()
}

/// Two refinement levels: the better root method delegates to a subtask
/// with its own choice.
pub fn micro3() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-3");
    let t = b.task("t", &[]);
    let u = b.task("u", &[]);
    let x = b.action("x", &[]).outcome("ok", 1.0, 1.0, vec![]).build();
    let y = b.action("y", &[]).outcome("ok", 1.0, 4.0, vec![]).build();
    let r = b
        .action("r", &[])
        .outcome("ok", 0.7, 1.0, vec![])
        .failure("slip", 0.3, 1.0)
        .build();
    let z = b.action("z", &[]).outcome("ok", 1.0, 2.0, vec![]).build();
    b.method("m1", t, &[])
        .body(vec![act(x, []), subtask(u, [])])
        .build();
    b.method("m2", t, &[]).body(vec![act(y, [])]).build();
    b.method("u1", u, &[]).body(vec![act(r, [])]).build();
    b.method("u2", u, &[]).body(vec![act(z, [])]).build();
    b.finish()
}

/// State-dependent branching and a free method parameter with a rigid
/// cost table.
pub fn micro4() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-4");
    let (loc, locs) = b.enum_type("loc", &["A", "B"]);
    let flag = b.state_var("flag", &[], crate::model::BOOL);
    let near = b.rigid(
        "near",
        &[loc],
        Value::Int(1),
        vec![
            (vec![locs[0]], Value::Int(3)),
            (vec![locs[1]], Value::Int(1)),
        ],
    );
    let far = b.rigid(
        "far",
        &[loc],
        Value::Int(1),
        vec![
            (vec![locs[0]], Value::Int(3)),
            (vec![locs[1]], Value::Int(5)),
        ],
    );
    let t = b.task("t", &[]);
    let probe = b
        .action("probe", &[])
        .outcome("set", 0.5, 1.0, vec![effect(flag, [], true)])
        .outcome("clear", 0.5, 1.0, vec![effect(flag, [], false)])
        .build();
    let fast = b
        .action("fast", &[])
        .outcome("ok", 1.0, 1.0, vec![])
        .build();
    let slow = b
        .action("slow", &[])
        .outcome("ok", 1.0, 2.0, vec![])
        .build();
    let mv = b
        .action("move", &[("l", loc)])
        .outcome_with_cost("near", 0.5, rigid(near, [arg(0)]), vec![])
        .outcome_with_cost("far", 0.5, rigid(far, [arg(0)]), vec![])
        .build();
    let mut m = b.method("m-probe", t, &[]);
    let f = m.local("f");
    m.body(vec![
        act(probe, []),
        assign(f, sv(flag, [])),
        if_(f, vec![act(fast, [])], vec![act(slow, [])]),
    ])
    .build();
    let m = b.method("m-go", t, &[("l", loc)]);
    let l = m.param(0);
    m.body(vec![act(mv, [l.into()])]).build();
    b.finish()
}

/// Shared wear: the cheap subtask method can be used only once.
pub fn micro5() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-5");
    let worn = b.state_var("worn", &[], crate::model::BOOL);
    let t = b.task("t", &[]);
    let p = b.task("p", &[]);
    let use_ = b
        .action("use", &[])
        .outcome("ok", 0.9, 1.0, vec![effect(worn, [], true)])
        .failure("jam", 0.1, 1.0)
        .build();
    let steady = b
        .action("steady", &[])
        .outcome("ok", 1.0, 2.0, vec![])
        .build();
    let a = b.action("a", &[]).outcome("ok", 1.0, 2.0, vec![]).build();
    let coin = b
        .action("coin", &[])
        .outcome("heads", 0.5, 2.0, vec![])
        .outcome("tails", 0.5, 3.0, vec![])
        .build();
    b.method("m1", t, &[])
        .body(vec![subtask(p, []), subtask(p, [])])
        .build();
    b.method("m2", t, &[])
        .body(vec![act(a, []), act(coin, [])])
        .build();
    b.method("p1", p, &[])
        .pre(not(sv(worn, [])))
        .body(vec![act(use_, [])])
        .build();
    b.method("p2", p, &[]).body(vec![act(steady, [])]).build();
    b.finish()
}

/// Deterministic three-task fixture with a chute that always jams, so the
/// first stow method fails and is retried with the shelf method.
pub fn micro_trace() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-trace");
    let (item, _) = b.enum_type("item", &["i1", "i2"]);
    let (place, places) = b.enum_type("place", &["home", "shelf"]);
    let pos = b.state_var("pos", &[item], place);
    let held = b.state_var("held", &[item], crate::model::BOOL);
    let clean = b.state_var("clean", &[], crate::model::BOOL);
    let stow = b.task("stow", &[item]);
    let tidy = b.task("tidy", &[]);
    let sweep_t = b.task("sweep", &[]);
    let grab = b
        .action("grab", &[("i", item)])
        .outcome("ok", 1.0, 1.0, vec![effect(held, [arg(0)], true)])
        .build();
    let jam = b
        .action("chute", &[("i", item)])
        .failure("jammed", 1.0, 1.0)
        .build();
    let put = b
        .action("put", &[("i", item), ("p", place)])
        .duration(2)
        .outcome(
            "ok",
            1.0,
            2.0,
            vec![effect(pos, [arg(0)], arg(1)), effect(held, [arg(0)], false)],
        )
        .build();
    let sweep = b
        .action("brush", &[])
        .outcome("ok", 1.0, 1.0, vec![effect(clean, [], true)])
        .build();

    let m = b.method("stow-chute", stow, &[("i", item)]);
    let i = m.param(0);
    m.body(vec![act(grab, [i.into()]), act(jam, [i.into()])])
        .build();

    let m = b.method("stow-shelf", stow, &[("i", item)]);
    let i = m.param(0);
    m.body(vec![
        if_(sv(held, [i.into()]), vec![], vec![act(grab, [i.into()])]),
        act(put, [i.into(), places[1].into()]),
    ])
    .build();

    let mut m = b.method("tidy-all", tidy, &[]);
    let n = m.local("n");
    let j = m.local("j");
    m.body(vec![
        assign(
            n,
            count(filter(j, all(item), eq(sv(pos, [j.into()]), places[1]))),
        ),
        subtask(sweep_t, []),
    ])
    .build();
    b.method("sweep-floor", sweep_t, &[])
        .body(vec![act(sweep, [])])
        .build();
    b.finish()
}

/// Every action fails when executed: acting never succeeds.
pub fn micro_fail() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-fail");
    let job = b.task("job", &[]);
    let broken = b.action("broken", &[]).failure("fault", 1.0, 1.0).build();
    let cracked = b.action("cracked", &[]).failure("fault", 1.0, 1.0).build();
    b.method("try-a", job, &[])
        .body(vec![act(broken, [])])
        .build();
    b.method("try-b", job, &[])
        .body(vec![act(cracked, [])])
        .build();
    b.finish()
}

/// Three state variables and three interchangeable methods; used to
/// synthesize learning data whose label depends on one variable.
pub fn micro_sep() -> Result<Domain, DomainError> {
    let mut b = DomainBuilder::new("micro-sep");
    let (level, _) = b.enum_type("level", &["l0", "l1", "l2", "l3"]);
    b.state_var("a", &[], level);
    b.state_var("b", &[], level);
    b.state_var("c", &[], level);
    let pick = b.task("pick", &[]);
    b.task("idle", &[]);
    let noop = b
        .action("noop", &[])
        .outcome("ok", 1.0, 1.0, vec![])
        .build();
    for name in ["pick0", "pick1", "pick2"] {
        b.method(name, pick, &[]).body(vec![act(noop, [])]).build();
    }
    b.finish()
}
