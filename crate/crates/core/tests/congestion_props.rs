mod common;

use bramble_core::congestion::{
    build_reduced_instance, route_via_bramble, translate_solution, RouteOptions, RouteOutcome,
};
use bramble_core::ddp::{solve_exact, verify_solution, DdpInstance, SolveOutcome};
use bramble_core::obstruction::{congestion, occurrence_counts, verify_bramble};
use bramble_core::toolkit::gen_planted_bramble_instance;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_invariants_on_planted(seed in any::<u64>(), k in 1usize..=2, c in 1usize..=6) {
        let m = bramble_core::congestion::bramble_size_threshold(k).max(c);
        let doc = gen_planted_bramble_instance(k, c, m, seed).unwrap();
        let (bags, t) = (doc.bags().unwrap(), doc.terminals().unwrap());
        let r = build_reduced_instance(&doc.digraph, bags, &t.sources, &t.sinks).unwrap();
        prop_assert!(congestion(&r.bags_prime) <= 2);
        prop_assert_eq!(r.bags_prime.len(), bags.len());
        prop_assert!(verify_bramble(&r.d_prime, &r.bags_prime).unwrap().is_valid());
        let originals = r.d_prime.vertex_count() - 2 * k;
        for (v, oc) in occurrence_counts(bags) {
            let copies = (0..originals).filter(|&x| r.back_map[x] == v).count();
            prop_assert_eq!(copies, oc.div_ceil(2));
        }
    }

    #[test]
    fn translated_routing_respects_the_budget(seed in any::<u64>(), c in 3usize..=5) {
        let doc = gen_planted_bramble_instance(2, c, 18, seed).unwrap();
        let (bags, t) = (doc.bags().unwrap(), doc.terminals().unwrap());
        let r = build_reduced_instance(&doc.digraph, bags, &t.sources, &t.sinks).unwrap();
        if let SolveOutcome::Solved { solution, .. } = solve_exact(&r.ddp_instance().unwrap(), 2_000_000) {
            let translated = translate_solution(&r, &solution.paths).unwrap();
            let budget = 2 * c.div_ceil(2);
            let inst = DdpInstance::new(doc.digraph.clone(), t.sources.clone(), t.sinks.clone(), budget).unwrap();
            let report = verify_solution(&inst, &translated.paths);
            prop_assert!(report.is_valid(), "{:?}", report.violations);
        }
        match route_via_bramble(&doc.digraph, bags, &t.sources, &t.sinks, c, RouteOptions::default()).unwrap() {
            RouteOutcome::Routed { solution, budget, .. } => prop_assert!(solution.max_load() <= budget),
            other => prop_assert!(false, "planted instance not routed: {:?}", other),
        }
    }
}

#[test]
fn size_threshold_enforced() {
    let doc = gen_planted_bramble_instance(2, 3, 18, 1).unwrap();
    let (bags, t) = (doc.bags().unwrap(), doc.terminals().unwrap());
    let short = &bags[..17];
    assert!(route_via_bramble(
        &doc.digraph,
        short,
        &t.sources,
        &t.sinks,
        3,
        RouteOptions::default()
    )
    .is_err());
}
