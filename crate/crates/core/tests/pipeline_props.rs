mod common;

use bramble_core::lll::UGraph;
use bramble_core::pipeline::{
    build_conflict_graphs, classify_case, compute_parameters, is_matching, maximum_matching,
    verify_case_report, verify_parameters, LinkageFamily, ParameterInputs,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matching_is_maximum(n in 1usize..=10, p in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_ugraph(&mut rng, n, p);
        let m = maximum_matching(&g);
        prop_assert!(is_matching(&g, &m));
        prop_assert_eq!(m.len(), common::max_matching_brute(&g.edges()));
    }

    #[test]
    fn some_case_is_large(n in 1usize..=12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = common::random_case_input(&mut rng, n);
        let report = classify_case(&input).unwrap();
        prop_assert!(5 * report.witness_size() >= 3 * n);
        prop_assert!(verify_case_report(&input, &report).is_ok());
    }
}

#[test]
fn conflict_graphs_threshold_on_joint_degeneracy() {
    let fam = |pair, paths: Vec<Vec<usize>>| LinkageFamily { pair, paths };
    let families = vec![
        fam((0, 1), vec![vec![10, 11], vec![12, 13]]),
        fam((2, 3), vec![vec![10, 12], vec![11, 13]]),
        fam((4, 5), vec![vec![20, 21]]),
    ];
    let g = build_conflict_graphs(&families, 1, 0).unwrap();
    assert!(g.h1.has_edge(0, 1) || g.h2.has_edge(0, 1));
    assert!(!g.h1.has_edge(0, 2) && !g.h2.has_edge(0, 2));
    assert!(build_conflict_graphs(&families, 0, 1).is_err());
}

#[test]
fn parameters_verify_across_k() {
    for k in [2, 5, 17, 64] {
        let p = compute_parameters(ParameterInputs::new(k, 1.66, 0.248)).unwrap();
        assert!(p.checks.all());
        assert!(p.d1 > p.d2 && p.d2 > p.d3);
        assert!(verify_parameters(&p).is_ok());
    }
}

#[test]
fn case_report_rejects_a_tampered_witness() {
    let input = bramble_core::pipeline::CaseInput {
        pairs: vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)],
        z: vec![],
        h1: UGraph::from_edges(5, [(0, 1), (2, 3)]).unwrap(),
        h2: UGraph::new(5),
    };
    let mut report = classify_case(&input).unwrap();
    assert!(verify_case_report(&input, &report).is_ok());
    report.witness.pop();
    assert!(verify_case_report(&input, &report).is_err());
}
