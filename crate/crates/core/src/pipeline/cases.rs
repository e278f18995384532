use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::digraph::vertex_set;
use crate::error::{invalid, Error, Result};
use crate::lll::UGraph;

/// Maximum-cardinality matching (general graphs), edges as `(u, v)` with
/// `u < v`, sorted.
pub fn maximum_matching(h: &UGraph) -> Vec<(usize, usize)> {
    let mut g = UnGraph::<(), ()>::with_capacity(h.vertex_count(), h.edge_count());
    for _ in 0..h.vertex_count() {
        g.add_node(());
    }
    for (u, v) in h.edges() {
        g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    let matching = petgraph::algo::maximum_matching(&g);
    let mut edges: Vec<(usize, usize)> = matching
        .edges()
        .map(|(a, b)| (a.index().min(b.index()), a.index().max(b.index())))
        .collect();
    edges.sort_unstable();
    edges
}

/// Checks that `m` is a matching of `h`.
pub fn is_matching(h: &UGraph, m: &[(usize, usize)]) -> bool {
    let mut used = vec![false; h.vertex_count()];
    m.iter().all(|&(u, v)| {
        h.has_edge(u, v)
            && !std::mem::replace(&mut used[u], true)
            && !std::mem::replace(&mut used[v], true)
    })
}

/// Input of [`classify_case`]: `h1` and `h2` live on `0..pairs.len()` and
/// `z` lists the pairs resolved by the external lemma.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseInput {
    pub pairs: Vec<(usize, usize)>,
    pub z: Vec<usize>,
    pub h1: UGraph,
    pub h2: UGraph,
}

impl CaseInput {
    pub fn validate(&self) -> Result<()> {
        let n = self.pairs.len();
        if self.h1.vertex_count() != n || self.h2.vertex_count() != n {
            return Err(invalid(format!(
                "conflict graphs have {} and {} vertices for {n} pairs",
                self.h1.vertex_count(),
                self.h2.vertex_count()
            )));
        }
        if let Some(&v) = self.z.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub n: usize,
    pub z: Vec<usize>,
    pub m1: Vec<(usize, usize)>,
    pub m2: Vec<(usize, usize)>,
    /// 1, 2 or 3: the first case whose set reaches `0.6|V|`.
    pub case: u8,
    pub witness: Vec<usize>,
}

impl CaseReport {
    pub fn witness_size(&self) -> usize {
        self.witness.len()
    }
}

/// `5·size >= 3·n`, i.e. `size >= 0.6 n` without rounding.
fn large(size: usize, n: usize) -> bool {
    5 * size >= 3 * n
}

fn covered(m: &[(usize, usize)], n: usize) -> Vec<bool> {
    let mut c = vec![false; n];
    for &(u, v) in m {
        c[u] = true;
        c[v] = true;
    }
    c
}

/// `M₁` is a maximum matching of `H₁ - Z`; `M₂` a maximum matching of `H₂`
/// without `V(M₁)` and without edges inside `Z`. Returns the first of
/// (1) `V \ (V(M₁) ∪ Z)`, (2) `V(M₁) ∪ V(M₂) ∪ Z`, (3) `V \ V(M₂)` with at
/// least `0.6|V|` elements. One of them always qualifies.
pub fn classify_case(input: &CaseInput) -> Result<CaseReport> {
    input.validate()?;
    let n = input.pairs.len();
    let z = vertex_set(input.z.iter().copied());
    let mut in_z = vec![false; n];
    z.iter().for_each(|&v| in_z[v] = true);

    let h1z = UGraph::from_edges(
        n,
        input
            .h1
            .edges()
            .into_iter()
            .filter(|&(u, v)| !in_z[u] && !in_z[v]),
    )?;
    let m1 = maximum_matching(&h1z);
    let c1 = covered(&m1, n);
    let h2r = UGraph::from_edges(
        n,
        input
            .h2
            .edges()
            .into_iter()
            .filter(|&(u, v)| !(in_z[u] && in_z[v]) && !c1[u] && !c1[v]),
    )?;
    let m2 = maximum_matching(&h2r);
    let c2 = covered(&m2, n);

    let sets: [Vec<usize>; 3] = [
        (0..n).filter(|&v| !c1[v] && !in_z[v]).collect(),
        (0..n).filter(|&v| c1[v] || c2[v] || in_z[v]).collect(),
        (0..n).filter(|&v| !c2[v]).collect(),
    ];
    let Some(idx) = sets.iter().position(|s| large(s.len(), n)) else {
        return Err(Error::Internal(format!(
            "no case reaches 0.6|V|: sizes {}, {}, {} of {n}",
            sets[0].len(),
            sets[1].len(),
            sets[2].len()
        )));
    };
    Ok(CaseReport {
        n,
        z,
        m1,
        m2,
        case: idx as u8 + 1,
        witness: sets[idx].clone(),
    })
}

/// Re-derives a report: matchings valid, maximum and correctly restricted;
/// witness equal to the claimed case set and large enough.
pub fn verify_case_report(input: &CaseInput, r: &CaseReport) -> Result<(), String> {
    let fresh = classify_case(input).map_err(|e| e.to_string())?;
    let n = input.pairs.len();
    let in_z = |v: usize| r.z.binary_search(&v).is_ok();
    if r.n != n || r.z != fresh.z {
        return Err("report does not describe this input".into());
    }
    if !is_matching(&input.h1, &r.m1) || r.m1.iter().any(|&(u, v)| in_z(u) || in_z(v)) {
        return Err("M1 is not a matching of H1 - Z".into());
    }
    let c1 = covered(&r.m1, n);
    if !is_matching(&input.h2, &r.m2)
        || r.m2
            .iter()
            .any(|&(u, v)| (in_z(u) && in_z(v)) || c1[u] || c1[v])
    {
        return Err("M2 is not a matching of the restricted H2".into());
    }
    if r.m1.len() != fresh.m1.len() {
        return Err(format!(
            "M1 has {} edges, maximum is {}",
            r.m1.len(),
            fresh.m1.len()
        ));
    }
    if r.case != fresh.case || r.witness != fresh.witness {
        // Another maximum M1 may legitimately change M2; recheck the claim itself.
        let c2 = covered(&r.m2, n);
        let set: Vec<usize> = match r.case {
            1 => (0..n).filter(|&v| !c1[v] && !in_z(v)).collect(),
            2 => (0..n).filter(|&v| c1[v] || c2[v] || in_z(v)).collect(),
            3 => (0..n).filter(|&v| !c2[v]).collect(),
            c => return Err(format!("unknown case {c}")),
        };
        if set != r.witness {
            return Err(format!("witness does not match case {}", r.case));
        }
    }
    if !large(r.witness.len(), n) {
        return Err(format!(
            "witness has {} of {n} elements, below 0.6|V|",
            r.witness.len()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(n: usize, z: Vec<usize>, h1: UGraph, h2: UGraph) -> CaseInput {
        let pairs = (0..n).map(|i| (i, i + 1)).collect();
        CaseInput { pairs, z, h1, h2 }
    }

    #[test]
    fn matching_sizes() {
        let p3 = UGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(maximum_matching(&p3).len(), 1);
        let pm = UGraph::from_edges(6, [(0, 1), (2, 3), (4, 5), (1, 2)]).unwrap();
        assert_eq!(maximum_matching(&pm).len(), 3);
        let c5 = UGraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let m = maximum_matching(&c5);
        assert!(is_matching(&c5, &m) && m.len() == 2);
    }

    #[test]
    fn trivial_cases() {
        let r = classify_case(&input(5, vec![], UGraph::new(5), UGraph::new(5))).unwrap();
        assert_eq!((r.case, r.witness_size()), (1, 5));
        let all = input(
            5,
            (0..5).collect(),
            UGraph::complete(5),
            UGraph::complete(5),
        );
        let r = classify_case(&all).unwrap();
        assert_eq!(r.case, 2);
        verify_case_report(&all, &r).unwrap();
    }

    #[test]
    fn case_three() {
        // Half of V in Z and H2 only inside Z.
        let h2 = UGraph::from_edges(10, [(0, 1), (2, 3)]).unwrap();
        let r = classify_case(&input(10, vec![0, 1, 2, 3, 4], UGraph::new(10), h2)).unwrap();
        assert_eq!(r.case, 3);
        assert_eq!(r.witness, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn bad_report_rejected() {
        let inp = input(4, vec![], UGraph::complete(4), UGraph::new(4));
        let mut r = classify_case(&inp).unwrap();
        r.m1.pop();
        assert!(verify_case_report(&inp, &r).is_err());
    }
}
