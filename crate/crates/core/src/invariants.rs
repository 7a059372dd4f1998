//! Properties that span the model, oracle, trimming and solver modules.

use crate::model::{generate_random_instance, RandomSpec};
use crate::oracle::{optimal_run_at_speed, search, SearchMode};
use crate::speedup::solve_trimmed;
use crate::trimming::{enumerate_configs, trim};
use crate::{q, validate_run, Instance, MetricKind, Rational, ServiceRun};
use proptest::prelude::*;

fn instance(seed: u64, requests: usize, nodes: usize, tree: bool) -> Instance {
    let spec = RandomSpec {
        requests,
        nodes,
        kind: if tree {
            MetricKind::Tree
        } else {
            MetricKind::General
        },
        spacing: q(1, 4),
        horizon: q(4, 1),
    };
    generate_random_instance(spec, seed).unwrap()
}

fn speed_from(idx: usize) -> Rational {
    [q(1, 1), q(5, 4), q(3, 2), q(2, 1), q(5, 2), q(4, 1)][idx]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_distances_and_speed_together_preserves_runs(
        seed in any::<u64>(),
        requests in 1usize..7,
        nodes in 1usize..5,
        tree in any::<bool>(),
        speed in 0usize..6,
        factor in 1i128..5,
        denom in 1i128..4,
    ) {
        let inst = instance(seed, requests, nodes, tree);
        let s = speed_from(speed);
        let run = optimal_run_at_speed(&inst, s, 10).unwrap();
        let profit = validate_run(&inst, &run).unwrap();
        let c = q(factor, denom);
        let scaled = inst.scale_distances(c);
        let moved = ServiceRun { speed: run.speed * c, ..run.clone() };
        prop_assert_eq!(validate_run(&scaled, &moved), Ok(profit));
        let best = optimal_run_at_speed(&scaled, s * c, 10).unwrap();
        prop_assert_eq!(validate_run(&scaled, &best), Ok(profit));
    }

    #[test]
    fn pruning_never_changes_the_optimum(
        seed in any::<u64>(),
        requests in 1usize..7,
        nodes in 1usize..5,
        speed in 0usize..6,
    ) {
        let inst = instance(seed, requests, nodes, false);
        let s = speed_from(speed);
        let a = search(&inst, s, 10, SearchMode::Pruned).unwrap();
        let b = search(&inst, s, 10, SearchMode::Exhaustive).unwrap();
        prop_assert_eq!(validate_run(&inst, &a), validate_run(&inst, &b));
    }

    #[test]
    fn trimmed_solver_matches_oracle(
        seed in any::<u64>(),
        requests in 1usize..8,
        nodes in 1usize..5,
        tree in any::<bool>(),
        config in 0usize..22,
        speed in 0usize..6,
    ) {
        let inst = instance(seed, requests, nodes, tree);
        let tr = trim(&inst, &enumerate_configs()[config]).unwrap();
        let s = speed_from(speed);
        let run = solve_trimmed(&tr, s, 10).unwrap();
        let best = optimal_run_at_speed(tr.instance(), s, 10).unwrap();
        prop_assert_eq!(validate_run(tr.instance(), &run), validate_run(tr.instance(), &best));
    }

    #[test]
    fn faster_is_never_worse(seed in any::<u64>(), requests in 1usize..7, nodes in 1usize..5) {
        let inst = instance(seed, requests, nodes, false);
        let mut last = Rational::ZERO;
        for idx in 0..6 {
            let run = optimal_run_at_speed(&inst, speed_from(idx), 10).unwrap();
            let p = validate_run(&inst, &run).unwrap();
            prop_assert!(p >= last);
            last = p;
        }
    }
}
