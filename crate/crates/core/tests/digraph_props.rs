mod common;

use bramble_core::digraph::{
    is_k_strong, menger_paths_and_separator, strong_components, strong_connectivity,
};
use bramble_core::Digraph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn reach_within(d: &Digraph, alive: &[bool], s: usize) -> Vec<bool> {
    let mut seen = vec![false; d.vertex_count()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(v) = stack.pop() {
        for &w in d.out_neighbors(v) {
            if alive[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn strong_within(d: &Digraph, alive: &[bool]) -> bool {
    let verts: Vec<usize> = (0..d.vertex_count()).filter(|&v| alive[v]).collect();
    verts.iter().all(|&s| {
        let r = reach_within(d, alive, s);
        verts.iter().all(|&v| r[v])
    })
}

/// Smallest deletion leaving at least two vertices and a non-strong rest.
fn connectivity_brute(d: &Digraph) -> usize {
    let n = d.vertex_count();
    let mut best = n - 1;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size >= best || n - size < 2 {
            continue;
        }
        let alive: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 0).collect();
        if !strong_within(d, &alive) {
            best = size;
        }
    }
    best
}

fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (2..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_digraph(&mut rng, n, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn menger_value_matches_flow_oracle(d in arb_digraph(14), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = d.vertex_count();
        let a = common::random_subset(&mut rng, n, 1 + seed as usize % n);
        let b = common::random_subset(&mut rng, n, 1 + (seed >> 8) as usize % n);
        let cert = menger_paths_and_separator(&d, &a, &b).unwrap();
        prop_assert_eq!(cert.value(), common::max_disjoint_paths(&d, &a, &b));
        prop_assert_eq!(cert.separator.len(), cert.value());
        prop_assert!(cert.verify(&d).is_ok());
    }

    #[test]
    fn connectivity_matches_subset_oracle(d in arb_digraph(7)) {
        let kappa = strong_connectivity(&d).unwrap();
        prop_assert_eq!(kappa, connectivity_brute(&d));
        prop_assert!(is_k_strong(&d, kappa));
        prop_assert!(!is_k_strong(&d, kappa + 1));
    }

    #[test]
    fn components_are_mutual_reachability_classes(d in arb_digraph(12)) {
        let n = d.vertex_count();
        let alive = vec![true; n];
        let reach: Vec<Vec<bool>> = (0..n).map(|s| reach_within(&d, &alive, s)).collect();
        let comps = strong_components(&d);
        let mut comp_of = vec![usize::MAX; n];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                prop_assert_eq!(comp_of[v], usize::MAX);
                comp_of[v] = i;
            }
        }
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(comp_of[u] == comp_of[v], reach[u][v] && reach[v][u]);
            }
        }
    }
}

#[test]
fn complete_digraph_connectivity() {
    for n in 2..9 {
        assert_eq!(strong_connectivity(&Digraph::complete(n)).unwrap(), n - 1);
    }
}

#[test]
fn separator_kills_reachability_on_a_cycle() {
    let d = Digraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
    let cert = menger_paths_and_separator(&d, &[0], &[3]).unwrap();
    assert_eq!(cert.value(), 1);
    assert!(cert.verify(&d).is_ok());
}
