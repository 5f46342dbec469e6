use proptest::prelude::*;

use rae_cli::rows::{read_rows, write_rows, Row};
use rae_cli::summary::{estimate, gap};

fn row() -> impl Strategy<Value = Row> {
    (
        prop::sample::select(vec!["fetch", "nav", "sr", "explore"]),
        "[a-z0-9-]{1,12}",
        any::<u32>(),
        prop::sample::select(vec!["reactive", "upom", "lm1", "lm2", "upom+nnH"]),
        any::<usize>(),
        any::<bool>(),
        prop_oneof![Just(0.0), 1e-6f64..1e6],
        0.0f64..10.0,
        any::<u64>(),
        any::<u64>(),
    )
        .prop_map(
            |(domain, problem_id, run_id, mode, task_id, success, cost, t, rollouts, seed)| Row {
                domain: domain.into(),
                problem_id,
                run_id,
                mode: mode.into(),
                task_id,
                success: success as u8,
                cost,
                efficiency: match (success, cost) {
                    (false, _) => 0.0,
                    (true, 0.0) => f64::INFINITY,
                    (true, c) => 1.0 / c,
                },
                planning_time_s: t,
                rollouts,
                seed,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rows_round_trip_exactly(a in prop::collection::vec(row(), 0..20), b in prop::collection::vec(row(), 0..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        write_rows(&path, &a, false).unwrap();
        write_rows(&path, &b, true).unwrap();
        let back = read_rows(&path).unwrap();
        prop_assert_eq!(back, [a, b].concat());
    }

    #[test]
    fn intervals_are_centred_and_shift_invariant(xs in prop::collection::vec(0.0f64..1.0, 1..200), shift in 0.0f64..1.0) {
        let e = estimate(&xs);
        prop_assert!(e.half_width >= 0.0);
        prop_assert!(e.low() <= e.mean && e.mean <= e.high());
        let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(min - 1e-12 <= e.mean && e.mean <= max + 1e-12);
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let g = gap(&shifted, &xs);
        prop_assert!((g.mean - shift).abs() < 1e-9);
        prop_assert!((g.half_width - e.half_width * std::f64::consts::SQRT_2).abs() < 1e-9);
    }
}
