use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::condition::check_poly_lll_condition;
use super::graph::{degeneracy, UGraph};
use crate::error::{invalid, Error, Result};

/// Largest transversal space `t^r` that [`rainbow_exhaustive`] enumerates.
pub const EXHAUSTIVE_GUARD: u64 = 10_000_000;

/// Graph whose vertex set is split into `r` parts of equal size `t`, with
/// `G[V_i ∪ V_j]` declared `b`-degenerate for all `i != j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConflictRepr", into = "ConflictRepr")]
pub struct PartitionedConflictGraph {
    graph: UGraph,
    parts: Vec<Vec<usize>>,
    b: f64,
    part_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ConflictRepr {
    graph: UGraph,
    parts: Vec<Vec<usize>>,
    b: f64,
}

impl TryFrom<ConflictRepr> for PartitionedConflictGraph {
    type Error = Error;

    fn try_from(r: ConflictRepr) -> Result<Self> {
        PartitionedConflictGraph::new(r.graph, r.parts, r.b)
    }
}

impl From<PartitionedConflictGraph> for ConflictRepr {
    fn from(p: PartitionedConflictGraph) -> Self {
        ConflictRepr {
            graph: p.graph,
            parts: p.parts,
            b: p.b,
        }
    }
}

impl PartitionedConflictGraph {
    /// Validates the partition, the part sizes, every pairwise degeneracy
    /// against `b`, and the cross-edge count `|F| <= 2r²bt`.
    pub fn new(graph: UGraph, parts: Vec<Vec<usize>>, b: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(invalid(format!(
                "b must be a finite non-negative real, got {b}"
            )));
        }
        if parts.is_empty() {
            return Err(invalid("at least one part is required"));
        }
        let t = parts[0].len();
        if t == 0 {
            return Err(invalid("parts must be non-empty"));
        }
        let n = graph.vertex_count();
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.len() != t {
                return Err(invalid(format!(
                    "part {i} has {} vertices, part 0 has {t}",
                    part.len()
                )));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(invalid(format!("vertex {v} lies in two parts")));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(invalid(format!("vertex {v} lies in no part")));
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let union: Vec<usize> = parts[i].iter().chain(&parts[j]).copied().collect();
                let (dg, _) = degeneracy(&graph.induced(&union));
                if dg as f64 > b {
                    return Err(invalid(format!(
                        "parts {i} and {j} induce a {dg}-degenerate subgraph, above b = {b}"
                    )));
                }
            }
        }
        let p = PartitionedConflictGraph {
            graph,
            parts,
            b,
            part_of,
        };
        let (f, bound) = (p.cross_edge_count(), p.cross_edge_bound());
        if f as f64 > bound {
            return Err(Error::Internal(format!(
                "{f} cross edges exceed 2r²bt = {bound}"
            )));
        }
        Ok(p)
    }

    pub fn graph(&self) -> &UGraph {
        &self.graph
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn t(&self) -> usize {
        self.parts[0].len()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// Number of neighbours of `v` outside its own part.
    pub fn cross_degree(&self, v: usize) -> usize {
        let own = self.part_of[v];
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&w| self.part_of[w] != own)
            .count()
    }

    /// `|F|`: edges whose endpoints lie in different parts.
    pub fn cross_edge_count(&self) -> usize {
        self.graph
            .edges()
            .into_iter()
            .filter(|&(u, v)| self.part_of[u] != self.part_of[v])
            .count()
    }

    pub fn cross_edge_bound(&self) -> f64 {
        let r = self.r() as f64;
        2.0 * r * r * self.b * self.t() as f64
    }
}

/// Checks one vertex per part, in part order, with no edge among them.
pub fn verify_rainbow(p: &PartitionedConflictGraph, selection: &[usize]) -> Result<(), String> {
    if selection.len() != p.r() {
        return Err(format!(
            "{} vertices selected for {} parts",
            selection.len(),
            p.r()
        ));
    }
    for (i, &v) in selection.iter().enumerate() {
        if v >= p.graph.vertex_count() || p.part_of(v) != i {
            return Err(format!("selected vertex {v} is not in part {i}"));
        }
    }
    for (i, &u) in selection.iter().enumerate() {
        for &v in &selection[i + 1..] {
            if p.graph.has_edge(u, v) {
                return Err(format!("selected vertices {u} and {v} are adjacent"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RainbowOutcome {
    Found {
        selection: Vec<usize>,
        resamples: u64,
    },
    CapExceeded {
        resamples: u64,
    },
}

impl RainbowOutcome {
    pub fn selection(&self) -> Option<&[usize]> {
        match self {
            RainbowOutcome::Found { selection, .. } => Some(selection),
            RainbowOutcome::CapExceeded { .. } => None,
        }
    }
}

/// Resampling search for an independent transversal. Each part starts with
/// a uniform vertex; while some selected pair is adjacent, the two parts of
/// the lexicographically smallest such edge are redrawn. With `epsilon` set,
/// the polynomial LLL condition must hold first.
pub fn rainbow_independent_set(
    p: &PartitionedConflictGraph,
    seed: u64,
    resample_cap: u64,
    epsilon: Option<f64>,
) -> Result<RainbowOutcome> {
    if let Some(eps) = epsilon {
        let check = check_poly_lll_condition(p.t() as u64, p.b(), p.r().max(2), eps)?;
        if !check.passes {
            return Err(Error::Precondition(format!(
                "t = {} fails the LLL condition for b = {}, r = {}, epsilon = {eps}",
                p.t(),
                p.b(),
                p.r()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = p.t();
    let mut selection: Vec<usize> = p
        .parts
        .iter()
        .map(|part| part[rng.gen_range(0..t)])
        .collect();
    let mut resamples = 0u64;
    loop {
        let Some((i, j)) = lowest_violated(p, &selection) else {
            verify_rainbow(p, &selection).map_err(Error::Internal)?;
            return Ok(RainbowOutcome::Found {
                selection,
                resamples,
            });
        };
        if resamples >= resample_cap {
            return Ok(RainbowOutcome::CapExceeded { resamples });
        }
        resamples += 1;
        selection[i] = p.parts[i][rng.gen_range(0..t)];
        selection[j] = p.parts[j][rng.gen_range(0..t)];
    }
}

/// Parts of the smallest edge `(u, v)`, `u < v`, inside the selection.
fn lowest_violated(p: &PartitionedConflictGraph, selection: &[usize]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (a, &u) in selection.iter().enumerate() {
        for &v in &selection[a + 1..] {
            if p.graph.has_edge(u, v) {
                let e = (u.min(v), u.max(v));
                if best.is_none_or(|b| e < b) {
                    best = Some(e);
                }
            }
        }
    }
    best.map(|(u, v)| {
        let (i, j) = (p.part_of(u), p.part_of(v));
        (i.min(j), i.max(j))
    })
}

/// Exhaustive backtracking over all transversals; the first independent one
/// in lexicographic part order, or `None`.
pub fn rainbow_exhaustive(p: &PartitionedConflictGraph) -> Result<Option<Vec<usize>>> {
    let space = (p.t() as u64).checked_pow(p.r() as u32);
    if space.is_none_or(|s| s > EXHAUSTIVE_GUARD) {
        return Err(Error::GuardExceeded(format!(
            "{}^{} transversals exceed the exhaustive limit {EXHAUSTIVE_GUARD}",
            p.t(),
            p.r()
        )));
    }
    fn go(p: &PartitionedConflictGraph, chosen: &mut Vec<usize>) -> bool {
        let i = chosen.len();
        if i == p.r() {
            return true;
        }
        for &v in &p.parts[i] {
            if chosen.iter().all(|&u| !p.graph.has_edge(u, v)) {
                chosen.push(v);
                if go(p, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(p.r());
    Ok(go(p, &mut chosen).then_some(chosen))
}

/// Result of [`degree_prune`]: vertex `i` of `graph` is vertex `kept[i]` of
/// the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunedConflictGraph {
    pub graph: PartitionedConflictGraph,
    pub kept: Vec<usize>,
    pub max_kept_degree: usize,
}

/// Keeps in every part the `⌈t/2⌉` vertices of smallest cross-part degree
/// (ties by index) and asserts they have degree at most `4t(r-1)b`.
pub fn degree_prune(p: &PartitionedConflictGraph) -> Result<PrunedConflictGraph> {
    let keep = p.t().div_ceil(2);
    let mut kept = Vec::with_capacity(keep * p.r());
    let mut parts = Vec::with_capacity(p.r());
    let mut max_kept_degree = 0;
    for part in &p.parts {
        let mut ranked: Vec<(usize, usize)> =
            part.iter().map(|&v| (p.cross_degree(v), v)).collect();
        ranked.sort_unstable();
        let mut ids = Vec::with_capacity(keep);
        for &(deg, v) in &ranked[..keep] {
            max_kept_degree = max_kept_degree.max(deg);
            ids.push(kept.len());
            kept.push(v);
        }
        parts.push(ids);
    }
    let bound = 4.0 * p.t() as f64 * (p.r() as f64 - 1.0) * p.b;
    if max_kept_degree as f64 > bound {
        return Err(Error::Internal(format!(
            "kept vertex of degree {max_kept_degree} exceeds 4t(r-1)b = {bound}"
        )));
    }
    let graph = PartitionedConflictGraph::new(p.graph.induced(&kept), parts, p.b)?;
    Ok(PrunedConflictGraph {
        graph,
        kept,
        max_kept_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two parts of size `t` joined by a perfect matching `i <-> t + i`.
    fn matching(t: usize) -> PartitionedConflictGraph {
        let g = UGraph::from_edges(2 * t, (0..t).map(|i| (i, t + i))).unwrap();
        PartitionedConflictGraph::new(g, vec![(0..t).collect(), (t..2 * t).collect()], 1.0).unwrap()
    }

    #[test]
    fn edgeless_needs_no_resample() {
        let g = UGraph::new(6);
        let p = PartitionedConflictGraph::new(g, vec![vec![0, 1], vec![2, 3], vec![4, 5]], 0.0)
            .unwrap();
        match rainbow_independent_set(&p, 7, 0, Some(0.5)).unwrap() {
            RainbowOutcome::Found {
                resamples,
                selection,
            } => {
                assert_eq!(resamples, 0);
                verify_rainbow(&p, &selection).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn matched_parts() {
        let p = matching(40);
        for seed in 0..20 {
            let out = rainbow_independent_set(&p, seed, 1000, Some(0.2)).unwrap();
            let sel = out.selection().unwrap();
            assert_ne!(sel[1], sel[0] + 40);
            assert_eq!(
                out,
                rainbow_independent_set(&p, seed, 1000, Some(0.2)).unwrap()
            );
        }
    }

    #[test]
    fn condition_enforced_when_requested() {
        let p = matching(4);
        assert!(matches!(
            rainbow_independent_set(&p, 0, 10, Some(0.2)),
            Err(Error::Precondition(_))
        ));
        assert!(rainbow_independent_set(&p, 0, 100, None).is_ok());
    }

    #[test]
    fn infeasible_hits_cap() {
        // Single-vertex parts joined by an edge.
        let g = UGraph::from_edges(2, [(0, 1)]).unwrap();
        let p = PartitionedConflictGraph::new(g, vec![vec![0], vec![1]], 1.0).unwrap();
        assert_eq!(
            rainbow_independent_set(&p, 3, 25, None).unwrap(),
            RainbowOutcome::CapExceeded { resamples: 25 }
        );
        assert_eq!(rainbow_exhaustive(&p).unwrap(), None);
    }

    #[test]
    fn validation() {
        let g = UGraph::complete(4);
        assert!(
            PartitionedConflictGraph::new(g.clone(), vec![vec![0, 1], vec![2, 3]], 2.0).is_err()
        );
        assert!(
            PartitionedConflictGraph::new(g.clone(), vec![vec![0, 1], vec![2, 3]], 3.0).is_ok()
        );
        assert!(PartitionedConflictGraph::new(g.clone(), vec![vec![0, 1], vec![2]], 3.0).is_err());
        assert!(PartitionedConflictGraph::new(g, vec![vec![0, 1], vec![1, 2]], 3.0).is_err());
    }

    #[test]
    fn prune_drops_hubs() {
        // Vertex 0 is adjacent to the whole second part.
        let g = UGraph::from_edges(8, (4..8).map(|v| (0, v))).unwrap();
        let p = PartitionedConflictGraph::new(g, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]], 1.0)
            .unwrap();
        let pruned = degree_prune(&p).unwrap();
        assert_eq!(pruned.kept, vec![1, 2, 4, 5]);
        assert_eq!(pruned.graph.graph().edge_count(), 0);
        assert_eq!(pruned.graph.t(), 2);
    }
}
