//! Synthetic dataset on the `micro-sep` domain whose label depends on one
//! state variable only.

use rae_core::learn::TrainingRecord;
use rae_core::model::{Domain, MethodId, State, Task};
use rae_core::sim::SimRng;

pub fn random_state(dom: &Domain, rng: &mut SimRng) -> State {
    let values = (0..dom.n_vars())
        .map(|slot| {
            let r = dom.var_range(slot).values();
            r[rng.below(r.len())]
        })
        .collect();
    State::from_values(dom, values).unwrap()
}

pub fn level(dom: &Domain, s: &State, var: &str) -> usize {
    let slot = dom.slot_by_name(&format!("{var}()")).unwrap();
    dom.var_range(slot).position(s.get(slot)).unwrap()
}

pub fn pick_task(dom: &Domain) -> Task {
    Task::new(dom.task_by_name("pick").unwrap(), vec![])
}

/// Label determined by `a` alone.
pub fn separable_records(dom: &Domain, n: usize, seed: u64) -> Vec<TrainingRecord> {
    let mut rng = SimRng::new(seed);
    let picks: Vec<MethodId> = ["pick0", "pick1", "pick2"]
        .iter()
        .map(|m| dom.method_by_name(m).unwrap())
        .collect();
    (0..n)
        .map(|_| {
            let state = random_state(dom, &mut rng);
            let a = level(dom, &state, "a");
            TrainingRecord {
                method: picks[a % 3],
                utility: Some(0.1 * a as f64 + 0.01 * rng.next_f64()),
                success: Some(true),
                task: pick_task(dom),
                state,
            }
        })
        .collect()
}
