//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use bramble_core::lll::{PartitionedConflictGraph, UGraph};
use bramble_core::pipeline::CaseInput;
use bramble_core::Digraph;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::from_edges(n, edges).unwrap()
}

pub fn random_ugraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> UGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UGraph::from_edges(n, edges).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

/// Maximum number of vertex-disjoint `A -> B` paths by augmenting paths on a
/// dense capacity matrix with every vertex split in two.
pub fn max_disjoint_paths(d: &Digraph, a: &[usize], b: &[usize]) -> usize {
    let n = d.vertex_count();
    let (src, dst) = (2 * n, 2 * n + 1);
    let size = 2 * n + 2;
    let big = n + 1;
    let mut cap = vec![vec![0usize; size]; size];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = 1;
    }
    for (u, v) in d.edges() {
        cap[2 * u + 1][2 * v] = big;
    }
    for &v in a {
        cap[src][2 * v] = big;
    }
    for &v in b {
        cap[2 * v + 1][dst] = big;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for y in 0..size {
                if prev[y] == usize::MAX && cap[x][y] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[dst] == usize::MAX {
            return flow;
        }
        let mut y = dst;
        while y != src {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
}

/// Every simple `s -> t` path.
pub fn simple_paths(d: &Digraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(
        d: &Digraph,
        t: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in d.out_neighbors(v) {
            if !on[w] {
                on[w] = true;
                path.push(w);
                go(d, t, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut on = vec![false; d.vertex_count()];
    on[s] = true;
    let mut out = Vec::new();
    go(d, t, &mut vec![s], &mut on, &mut out);
    out
}

/// Whether some tuple of simple paths routes every pair with every vertex
/// load at most `c`.
pub fn ddp_feasible_brute(d: &Digraph, sources: &[usize], sinks: &[usize], c: usize) -> bool {
    let options: Vec<Vec<Vec<usize>>> = sources
        .iter()
        .zip(sinks)
        .map(|(&s, &t)| simple_paths(d, s, t))
        .collect();
    fn go(options: &[Vec<Vec<usize>>], i: usize, load: &mut [usize], c: usize) -> bool {
        if i == options.len() {
            return true;
        }
        for p in &options[i] {
            p.iter().for_each(|&v| load[v] += 1);
            let ok = p.iter().all(|&v| load[v] <= c) && go(options, i + 1, load, c);
            p.iter().for_each(|&v| load[v] -= 1);
            if ok {
                return true;
            }
        }
        false
    }
    go(&options, 0, &mut vec![0; d.vertex_count()], c)
}

/// Largest minimum degree over all non-empty induced subgraphs.
pub fn degeneracy_brute(g: &UGraph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 16);
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let min_deg = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| mask >> w & 1 == 1)
                    .count()
            })
            .min()
            .unwrap();
        best = best.max(min_deg);
    }
    best
}

/// Size of a maximum matching by recursion on the first remaining edge.
pub fn max_matching_brute(edges: &[(usize, usize)]) -> usize {
    match edges.split_first() {
        None => 0,
        Some((&(u, v), rest)) => {
            let without = max_matching_brute(rest);
            let disjoint: Vec<(usize, usize)> = rest
                .iter()
                .copied()
                .filter(|&(a, b)| a != u && a != v && b != u && b != v)
                .collect();
            without.max(1 + max_matching_brute(&disjoint))
        }
    }
}

/// Whether the parts admit a pairwise non-adjacent transversal.
pub fn transversal_exists_brute(p: &PartitionedConflictGraph) -> bool {
    fn go(p: &PartitionedConflictGraph, i: usize, chosen: &mut Vec<usize>) -> bool {
        if i == p.r() {
            return true;
        }
        for &v in &p.parts()[i] {
            if chosen.iter().all(|&u| !p.graph().has_edge(u, v)) {
                chosen.push(v);
                if go(p, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(p, 0, &mut Vec::new())
}

/// Parts `i*t .. (i+1)*t`; every pair of parts gets a random bipartite graph
/// in which each vertex, taken in a random order, joins at most `b` earlier
/// vertices of the other part. The union of two parts is then
/// `b`-degenerate.
pub fn random_conflict_graph<R: Rng>(
    rng: &mut R,
    r: usize,
    t: usize,
    b: usize,
    p: f64,
) -> PartitionedConflictGraph {
    let parts: Vec<Vec<usize>> = (0..r).map(|i| (i * t..(i + 1) * t).collect()).collect();
    let mut g = UGraph::new(r * t);
    for i in 0..r {
        for j in i + 1..r {
            let mut order: Vec<usize> = parts[i].iter().chain(&parts[j]).copied().collect();
            order.shuffle(rng);
            for (pos, &v) in order.iter().enumerate() {
                let other: Vec<usize> = order[..pos]
                    .iter()
                    .copied()
                    .filter(|&w| (w / t == i) != (v / t == i))
                    .collect();
                for &w in other.choose_multiple(rng, b) {
                    if rng.gen_bool(p) {
                        g.add_edge(v, w).unwrap();
                    }
                }
            }
        }
    }
    PartitionedConflictGraph::new(g, parts, b as f64).unwrap()
}

/// Arbitrary cross edges between parts, with `b` set to the worst pairwise
/// degeneracy measured by [`degeneracy_brute`].
pub fn random_tiny_conflict_graph<R: Rng>(
    rng: &mut R,
    r: usize,
    t: usize,
    p: f64,
) -> PartitionedConflictGraph {
    let parts: Vec<Vec<usize>> = (0..r).map(|i| (i * t..(i + 1) * t).collect()).collect();
    let mut g = UGraph::new(r * t);
    for u in 0..r * t {
        for v in u + 1..r * t {
            if u / t != v / t && rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    let mut b = 0;
    for i in 0..r {
        for j in i + 1..r {
            let union: Vec<usize> = parts[i].iter().chain(&parts[j]).copied().collect();
            b = b.max(degeneracy_brute(&g.induced(&union)));
        }
    }
    PartitionedConflictGraph::new(g, parts, b.max(1) as f64).unwrap()
}

pub fn random_case_input<R: Rng>(rng: &mut R, n: usize) -> CaseInput {
    let pairs = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
    let z_size = rng.gen_range(0..=n);
    let z = random_subset(rng, n, z_size);
    let (p1, p2) = (rng.gen_range(0.0..0.8), rng.gen_range(0.0..0.8));
    CaseInput {
        pairs,
        z,
        h1: random_ugraph(rng, n, p1),
        h2: random_ugraph(rng, n, p2),
    }
}
