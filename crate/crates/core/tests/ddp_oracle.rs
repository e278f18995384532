mod common;

use bramble_core::ddp::{
    dichotomy_check, solve_exact, verify_solution, DdpInstance, Dichotomy, SolveOutcome,
};
use bramble_core::Digraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, n: usize, k: usize, c: usize) -> DdpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(0.15..0.7);
    let d = common::random_digraph(&mut rng, n, p);
    let terminals = common::random_subset(&mut rng, n, 2 * k);
    let (sources, sinks) = terminals.split_at(k);
    DdpInstance::new(d, sources.to_vec(), sinks.to_vec(), c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn feasibility_matches_path_enumeration(seed in any::<u64>(), n in 4usize..=7, k in 1usize..=2, c in 1usize..=2) {
        let inst = instance(seed, n, k, c);
        let brute = common::ddp_feasible_brute(&inst.host, &inst.sources, &inst.sinks, c);
        match solve_exact(&inst, 1_000_000) {
            SolveOutcome::Solved { solution, .. } => {
                prop_assert!(brute);
                let report = verify_solution(&inst, &solution.paths);
                prop_assert!(report.is_valid(), "{:?}", report.violations);
                prop_assert!(solution.max_load() <= c);
            }
            SolveOutcome::Infeasible { .. } => prop_assert!(!brute),
            SolveOutcome::CapExceeded { .. } => prop_assert!(false, "cap hit on a tiny instance"),
        }
    }

    #[test]
    fn dichotomy_evidence_verifies(seed in any::<u64>(), n in 6usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = common::random_digraph(&mut rng, n, 0.3);
        let bags = vec![common::random_subset(&mut rng, n, 2)];
        let rest: Vec<usize> = (0..n).filter(|v| !bags[0].contains(v)).collect();
        let (sources, sinks) = (vec![rest[0], rest[1]], vec![rest[2], rest[3]]);
        match dichotomy_check(&d, &bags, &sources, &sinks, 2).unwrap() {
            Dichotomy::Linked { into_bags, out_of_bags } => {
                prop_assert!(into_bags.value() >= 2 && out_of_bags.value() >= 2);
                prop_assert!(into_bags.verify(&d).is_ok() && out_of_bags.verify(&d).is_ok());
            }
            Dichotomy::Separated(ev) => prop_assert!(ev.verify(&d, 2).is_ok()),
        }
    }
}

#[test]
fn cap_is_reported() {
    let d = Digraph::complete(9);
    let inst = DdpInstance::new(d, vec![0, 1, 2], vec![3, 4, 5], 1).unwrap();
    assert!(matches!(
        solve_exact(&inst, 1),
        SolveOutcome::CapExceeded { .. }
    ));
}
