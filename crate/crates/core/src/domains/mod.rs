//! Built-in domains and their random problem generators.

pub mod explore;
pub mod fetch;
pub mod micro;
pub mod nav;
pub mod sr;

use thiserror::Error;

use crate::model::{Domain, DomainError, State, Task};
use crate::sim::{rng::derive_seed, Arrival, Problem};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("unknown domain {0:?}")]
    Unknown(String),
    #[error(transparent)]
    Invalid(#[from] DomainError),
}

/// Benchmark domains.
pub const BENCHMARKS: &[&str] = &["fetch", "nav", "sr", "explore"];

/// Names accepted by [`build`].
pub const DOMAINS: &[&str] = &[
    "fetch",
    "nav",
    "sr",
    "explore",
    "micro-1",
    "micro-2",
    "micro-3",
    "micro-4",
    "micro-5",
    "micro-trace",
    "micro-fail",
    "micro-sep",
];

pub fn build(name: &str) -> Result<Domain, BuildError> {
    Ok(match name {
        "fetch" => fetch::build()?,
        "nav" => nav::build()?,
        "sr" => sr::build()?,
        "explore" => explore::build()?,
        "micro-1" => micro::micro1()?,
        "micro-2" => micro::micro2()?,
        "micro-3" => micro::micro3()?,
        "micro-4" => micro::micro4()?,
        "micro-5" => micro::micro5()?,
        "micro-trace" => micro::micro_trace()?,
        "micro-fail" => micro::micro_fail()?,
        "micro-sep" => micro::micro_sep()?,
        _ => return Err(BuildError::Unknown(name.to_string())),
    })
}

/// Problem `index` of the suite drawn from `seed`. Each problem gets its own
/// seed, so a suite prefix does not depend on the suite length.
pub fn generate(dom: &Domain, seed: u64, index: usize) -> Problem {
    let pseed = derive_seed(seed, &format!("problem-{index}"));
    let id = format!("{}-{seed}-{index:03}", dom.name());
    match dom.name() {
        "fetch" => fetch::generate(dom, &id, pseed),
        "nav" => nav::generate(dom, &id, pseed),
        "sr" => sr::generate(dom, &id, pseed),
        "explore" => explore::generate(dom, &id, pseed),
        _ => single_task_problem(dom, &id, pseed),
    }
}

pub fn gen_problems(dom: &Domain, count: usize, seed: u64) -> Vec<Problem> {
    (0..count).map(|i| generate(dom, seed, i)).collect()
}

/// Fixture domains: the first argument-free task, arriving at tick 0.
fn single_task_problem(dom: &Domain, id: &str, seed: u64) -> Problem {
    let arrivals = dom
        .tasks()
        .iter()
        .position(|t| !t.event && t.params.is_empty())
        .map(|i| Arrival {
            tick: 0,
            task: Task::new(crate::model::TaskId(i), vec![]),
        })
        .into_iter()
        .collect();
    Problem {
        id: id.to_string(),
        domain: dom.name().to_string(),
        seed,
        initial: State::initial(dom),
        arrivals,
        events: Vec::new(),
    }
}
