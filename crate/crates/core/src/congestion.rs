//! Reduction from a bramble of congestion `c` to one of congestion 2.
//!
//! Every vertex `v` lying in `oc(v) >= 3` bags gets `⌈oc(v)/2⌉ - 1` copies
//! (same in- and out-neighbours); consecutive pairs of the bags containing
//! `v` are handed one copy each, the copies of `v` are joined into a
//! bidirected clique `X_v`, and fresh terminals `s'_i`, `t'_i` are attached.
//! A congestion-2 routing in the reduced digraph maps back to a routing in
//! the original digraph with congestion at most `2⌈c/2⌉`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ddp::{
    dichotomy_check, solve_exact, verify_solution, DdpInstance, DdpSolution, Dichotomy,
    SeparatorEvidence, SolveOutcome,
};
use crate::digraph::{is_k_strong, vertex_set, Digraph, VertexPath};
use crate::error::{invalid, Error, Result};
use crate::obstruction::{congestion, normalize_bags, occurrence_counts, verify_bramble};

/// Bags needed for a `k`-pair routing: `4k² + 2(k - 1)`.
pub fn bramble_size_threshold(k: usize) -> usize {
    4 * k * k + 2 * k.saturating_sub(1)
}

/// The reduced instance. Bag `i` of `bags_prime` is the image of bag `i` of
/// the (deduplicated) original family, so the bag correspondence is the
/// identity on indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedInstance {
    pub d_prime: Digraph,
    pub original_vertices: usize,
    pub bags: Vec<Vec<usize>>,
    pub bags_prime: Vec<Vec<usize>>,
    /// `v -> X_v` (sorted, `v` first) for every `v` with `oc(v) >= 3`.
    pub copy_classes: BTreeMap<usize, Vec<usize>>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub sources_prime: Vec<usize>,
    pub sinks_prime: Vec<usize>,
    /// Original vertex of every vertex of `d_prime`; fresh terminals map to
    /// their terminal.
    pub back_map: Vec<usize>,
}

impl ReducedInstance {
    /// Bag correspondence `σ`: original bag index to reduced bag index.
    pub fn sigma(&self, bag: usize) -> usize {
        bag
    }

    pub fn k(&self) -> usize {
        self.sources.len()
    }

    /// The `(k, 2)` instance on the reduced digraph.
    pub fn ddp_instance(&self) -> Result<DdpInstance> {
        DdpInstance::new(
            self.d_prime.clone(),
            self.sources_prime.clone(),
            self.sinks_prime.clone(),
            2,
        )
    }

    /// Class representative of a reduced vertex: its original vertex, or
    /// `None` for the fresh terminals.
    fn class_of(&self, x: usize) -> Option<usize> {
        (x < self.first_terminal()).then(|| self.back_map[x])
    }

    fn first_terminal(&self) -> usize {
        self.d_prime.vertex_count() - 2 * self.k()
    }

    /// Checks every structural property of the reduction; returns the first
    /// failure.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.bags_prime.len() != self.bags.len() {
            return Err(format!(
                "{} reduced bags for {} original bags",
                self.bags_prime.len(),
                self.bags.len()
            ));
        }
        let c2 = congestion(&self.bags_prime);
        if c2 > 2 {
            return Err(format!("reduced bramble has congestion {c2}"));
        }
        let oc = occurrence_counts(&self.bags);
        for (&v, &count) in &oc {
            let class = self.copy_classes.get(&v);
            match (count >= 3, class) {
                (true, Some(xv)) => {
                    if xv.len() != count.div_ceil(2) {
                        return Err(format!("|X_{v}| = {} but oc = {count}", xv.len()));
                    }
                    for &a in xv {
                        for &b in xv {
                            if a != b && !self.d_prime.has_edge(a, b) {
                                return Err(format!("X_{v} misses arc ({a},{b})"));
                            }
                        }
                        if self.back_map[a] != v {
                            return Err(format!(
                                "copy {a} of {v} maps back to {}",
                                self.back_map[a]
                            ));
                        }
                    }
                }
                (false, None) => {}
                _ => return Err(format!("copy class of {v} inconsistent with oc = {count}")),
            }
        }
        let terminals: Vec<usize> = self
            .sources_prime
            .iter()
            .chain(&self.sinks_prime)
            .copied()
            .collect();
        for (i, bag) in self.bags_prime.iter().enumerate() {
            if bag.iter().any(|v| terminals.contains(v)) {
                return Err(format!("reduced bag {i} contains a fresh terminal"));
            }
            let originals = vertex_set(bag.iter().map(|&x| self.back_map[x]));
            if originals != self.bags[i] {
                return Err(format!(
                    "reduced bag {i} is not a copy-image of original bag {i}"
                ));
            }
        }
        for (i, &sp) in self.sources_prime.iter().enumerate() {
            if self.d_prime.in_degree(sp) != 0 || self.d_prime.out_degree(sp) == 0 {
                return Err(format!("terminal gadget s'_{i} malformed"));
            }
        }
        for (i, &tp) in self.sinks_prime.iter().enumerate() {
            if self.d_prime.out_degree(tp) != 0 || self.d_prime.in_degree(tp) == 0 {
                return Err(format!("terminal gadget t'_{i} malformed"));
            }
        }
        let report = verify_bramble(&self.d_prime, &self.bags_prime).map_err(|e| e.to_string())?;
        if let Some(v) = report.violation {
            return Err(format!("reduced bags are not a bramble: {v}"));
        }
        Ok(())
    }
}

/// Builds the congestion-2 instance. Bags are deduplicated first; vertices
/// with `oc(v) >= 3` are processed in ascending order and every copy takes a
/// snapshot of the current neighbourhood of `v` in the reduced digraph, so
/// copies of adjacent vertices end up adjacent to each other as well.
pub fn build_reduced_instance(
    d: &Digraph,
    bags: &[Vec<usize>],
    sources: &[usize],
    sinks: &[usize],
) -> Result<ReducedInstance> {
    for bag in bags {
        d.check_vertices(bag)?;
    }
    d.check_vertices(sources)?;
    d.check_vertices(sinks)?;
    if sources.is_empty() || sources.len() != sinks.len() {
        return Err(invalid(
            "sources and sinks must be non-empty ordered lists of equal length",
        ));
    }
    let k = sources.len();
    if vertex_set(sources.iter().copied()).len() != k
        || vertex_set(sinks.iter().copied()).len() != k
    {
        return Err(invalid("terminals must be pairwise distinct"));
    }
    if let Some(v) = sources.iter().find(|v| sinks.contains(v)) {
        return Err(invalid(format!("vertex {v} is both a source and a sink")));
    }
    let bags = normalize_bags(bags.iter().cloned());
    let n = d.vertex_count();
    let mut d_prime = d.clone();
    let mut back_map: Vec<usize> = (0..n).collect();
    let mut bags_prime = bags.clone();
    let mut copy_classes = BTreeMap::new();

    let oc = occurrence_counts(&bags);
    for (&v, &count) in oc.iter().filter(|(_, &c)| c >= 3) {
        let ell = count.div_ceil(2);
        let mut class = vec![v];
        for _ in 1..ell {
            let copy = d_prime.add_vertex();
            back_map.push(v);
            let outs = d_prime.out_neighbors(v).to_vec();
            let ins = d_prime.in_neighbors(v).to_vec();
            for w in outs {
                d_prime.add_edge(copy, w)?;
            }
            for w in ins {
                d_prime.add_edge(w, copy)?;
            }
            class.push(copy);
        }
        let containing: Vec<usize> = (0..bags.len()).filter(|&i| bags[i].contains(&v)).collect();
        // Bags 2i-1 and 2i (1-based) get v^i; the last copy takes the rest.
        for (pos, &bag) in containing.iter().enumerate() {
            let copy = class[(pos / 2).min(ell - 1)];
            let slot = bags_prime[bag]
                .iter()
                .position(|&x| x == v)
                .expect("bag still holds its original vertex");
            bags_prime[bag][slot] = copy;
        }
        copy_classes.insert(v, class);
    }
    for class in copy_classes.values() {
        for &a in class {
            for &b in class {
                if a != b {
                    d_prime.add_edge(a, b)?;
                }
            }
        }
    }
    for bag in &mut bags_prime {
        bag.sort_unstable();
    }

    let attach = |t: usize| copy_classes.get(&t).cloned().unwrap_or_else(|| vec![t]);
    let mut sources_prime = Vec::with_capacity(k);
    for &s in sources {
        let sp = d_prime.add_vertex();
        back_map.push(s);
        for x in attach(s) {
            d_prime.add_edge(sp, x)?;
        }
        sources_prime.push(sp);
    }
    let mut sinks_prime = Vec::with_capacity(k);
    for &t in sinks {
        let tp = d_prime.add_vertex();
        back_map.push(t);
        for x in attach(t) {
            d_prime.add_edge(x, tp)?;
        }
        sinks_prime.push(tp);
    }

    let reduced = ReducedInstance {
        d_prime,
        original_vertices: n,
        bags,
        bags_prime,
        copy_classes,
        sources: sources.to_vec(),
        sinks: sinks.to_vec(),
        sources_prime,
        sinks_prime,
        back_map,
    };
    reduced
        .check_invariants()
        .map_err(|e| Error::Internal(format!("reduced instance: {e}")))?;
    Ok(reduced)
}

/// Maps a verified congestion-2 solution of the reduced instance back to
/// `D`: each path keeps only the first vertex of every copy class and jumps
/// past the last one, then copies are replaced by their originals and the
/// fresh terminals are dropped.
pub fn translate_solution(r: &ReducedInstance, paths_prime: &[VertexPath]) -> Result<DdpSolution> {
    let inst = r.ddp_instance()?;
    let report = verify_solution(&inst, paths_prime);
    if !report.is_valid() {
        return Err(invalid(format!(
            "not a congestion-2 solution of the reduced instance: {}",
            report.violations.join("; ")
        )));
    }
    let mut paths = Vec::with_capacity(paths_prime.len());
    for p in paths_prime {
        let inner = &p.vertices()[1..p.len() - 1];
        let mut out = Vec::with_capacity(inner.len());
        let mut pos = 0;
        while pos < inner.len() {
            let class = r
                .class_of(inner[pos])
                .expect("fresh terminals only at path ends");
            let last = inner
                .iter()
                .rposition(|&x| r.class_of(x) == Some(class))
                .expect("class occurs at pos");
            out.push(class);
            pos = last + 1;
        }
        paths.push(VertexPath::new(out));
    }
    Ok(DdpSolution::from_paths(paths))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteOptions {
    pub node_cap: u64,
    pub check_strong: bool,
    pub check_bramble: bool,
    pub check_size: bool,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions {
            node_cap: 2_000_000,
            check_strong: true,
            check_bramble: true,
            check_size: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RouteOutcome {
    Routed {
        solution: DdpSolution,
        budget: usize,
        reduced_paths: Vec<VertexPath>,
    },
    /// The congestion-2 search on the reduced instance is exhausted; the
    /// Menger check on the reduced instance is attached.
    Infeasible {
        dichotomy: Box<Dichotomy>,
    },
    CapExceeded {
        nodes: u64,
    },
}

/// Evidence attached when the reduced routing fails.
pub fn reduced_dichotomy(r: &ReducedInstance) -> Result<Dichotomy> {
    dichotomy_check(
        &r.d_prime,
        &r.bags_prime,
        &r.sources_prime,
        &r.sinks_prime,
        r.k(),
    )
}

/// Routes `k` pairs with congestion `2⌈c/2⌉` through a bramble of
/// congestion `c`: reduce, solve the congestion-2 instance exactly, map the
/// paths back and verify them against `D`.
pub fn route_via_bramble(
    d: &Digraph,
    bags: &[Vec<usize>],
    sources: &[usize],
    sinks: &[usize],
    c: usize,
    opts: RouteOptions,
) -> Result<RouteOutcome> {
    let k = sources.len();
    if k == 0 || sinks.len() != k {
        return Err(invalid(
            "sources and sinks must be non-empty ordered lists of equal length",
        ));
    }
    if c == 0 {
        return Err(invalid("bramble congestion must be at least 1"));
    }
    let dedup = normalize_bags(bags.iter().cloned());
    if opts.check_size && dedup.len() < bramble_size_threshold(k) {
        return Err(Error::Precondition(format!(
            "bramble has {} bags, {} needed for k = {k}",
            dedup.len(),
            bramble_size_threshold(k)
        )));
    }
    if opts.check_bramble {
        if let Some(v) = verify_bramble(d, &dedup)?.violation {
            return Err(Error::Precondition(format!("bags are not a bramble: {v}")));
        }
        let actual = congestion(&dedup);
        if actual > c {
            return Err(Error::Precondition(format!(
                "bramble congestion {actual} exceeds c = {c}"
            )));
        }
    }
    if opts.check_strong && !is_k_strong(d, k) {
        return Err(Error::Precondition(format!("digraph is not {k}-strong")));
    }
    let reduced = build_reduced_instance(d, &dedup, sources, sinks)?;
    match solve_exact(&reduced.ddp_instance()?, opts.node_cap) {
        SolveOutcome::Solved { solution, .. } => {
            let translated = translate_solution(&reduced, &solution.paths)?;
            let budget = 2 * c.div_ceil(2);
            let inst = DdpInstance::new(d.clone(), sources.to_vec(), sinks.to_vec(), budget)?;
            let report = verify_solution(&inst, &translated.paths);
            if !report.is_valid() {
                return Err(Error::Internal(format!(
                    "translated solution fails verification: {}",
                    report.violations.join("; ")
                )));
            }
            Ok(RouteOutcome::Routed {
                solution: translated,
                budget,
                reduced_paths: solution.paths,
            })
        }
        SolveOutcome::Infeasible { .. } => Ok(RouteOutcome::Infeasible {
            dichotomy: Box::new(reduced_dichotomy(&reduced)?),
        }),
        SolveOutcome::CapExceeded { nodes } => Ok(RouteOutcome::CapExceeded { nodes }),
    }
}

/// Convenience accessor for callers that only care about separator evidence.
pub fn evidence(outcome: &RouteOutcome) -> Option<&SeparatorEvidence> {
    match outcome {
        RouteOutcome::Infeasible { dichotomy } => match dichotomy.as_ref() {
            Dichotomy::Separated(ev) => Some(ev),
            Dichotomy::Linked { .. } => None,
        },
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_thresholds() {
        assert_eq!(bramble_size_threshold(1), 4);
        assert_eq!(bramble_size_threshold(2), 18);
        assert_eq!(bramble_size_threshold(3), 40);
    }

    #[test]
    fn low_congestion_only_adds_gadgets() {
        let d = Digraph::complete(6);
        let bags = vec![vec![0, 1], vec![1, 2], vec![3]];
        let r = build_reduced_instance(&d, &bags, &[4], &[5]).unwrap();
        assert!(r.copy_classes.is_empty());
        assert_eq!(r.bags_prime, r.bags);
        assert_eq!(r.d_prime.vertex_count(), 8);
        assert_eq!(r.d_prime.out_neighbors(r.sources_prime[0]), &[4]);
        assert_eq!(r.d_prime.in_neighbors(r.sinks_prime[0]), &[5]);
    }

    #[test]
    fn five_bags_through_one_vertex() {
        // Vertex 0 lies in five bags {0, i}.
        let d = Digraph::complete(8);
        let bags: Vec<Vec<usize>> = (1..=5).map(|i| vec![0, i]).collect();
        let r = build_reduced_instance(&d, &bags, &[6], &[7]).unwrap();
        let xv = &r.copy_classes[&0];
        assert_eq!(xv.len(), 3);
        let holders = |x: usize| r.bags_prime.iter().filter(|b| b.contains(&x)).count();
        assert_eq!(holders(xv[0]), 2);
        assert_eq!(holders(xv[1]), 2);
        assert_eq!(holders(xv[2]), 1);
        assert!(r.bags_prime[0].contains(&xv[0]) && r.bags_prime[1].contains(&xv[0]));
        assert!(r.bags_prime[4].contains(&xv[2]));
    }

    #[test]
    fn copied_terminal_gets_arcs_to_whole_class() {
        let d = Digraph::complete(7);
        let bags: Vec<Vec<usize>> = (1..=4).map(|i| vec![0, i]).collect();
        let r = build_reduced_instance(&d, &bags, &[0], &[6]).unwrap();
        let xv = r.copy_classes[&0].clone();
        assert_eq!(xv.len(), 2);
        assert_eq!(r.d_prime.out_neighbors(r.sources_prime[0]), xv.as_slice());
    }

    #[test]
    fn shortcut_through_copy_class() {
        let d = Digraph::complete(8);
        let bags: Vec<Vec<usize>> = (1..=5).map(|i| vec![0, i]).collect();
        let r = build_reduced_instance(&d, &bags, &[6], &[7]).unwrap();
        let xv = r.copy_classes[&0].clone();
        let (sp, tp) = (r.sources_prime[0], r.sinks_prime[0]);
        // s' -> 6 -> v^1 -> 3 -> v^3 -> 7 -> t'
        let p = VertexPath::new(vec![sp, 6, xv[0], 3, xv[2], 7, tp]);
        let sol = translate_solution(&r, &[p]).unwrap();
        assert_eq!(sol.paths[0].vertices(), &[6, 0, 7]);
    }

    #[test]
    fn translation_rejects_bad_input() {
        let d = Digraph::complete(4);
        let r = build_reduced_instance(&d, &[vec![0]], &[1], &[2]).unwrap();
        let bogus = VertexPath::new(vec![r.sources_prime[0], 3, r.sinks_prime[0]]);
        assert!(translate_solution(&r, &[bogus]).is_err());
    }
}
