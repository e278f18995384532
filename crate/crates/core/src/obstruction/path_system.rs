use serde::{Deserialize, Serialize};

use super::linkage::{max_linkage, well_linked_witness, Linkage, WELL_LINKED_GUARD};
use crate::digraph::{is_k_strong, Digraph, VertexPath};
use crate::error::{invalid, Error, Result};

/// Linkage `L_{from,to}` from `A_from^out` to `A_to^in`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedLinkage {
    pub from: usize,
    pub to: usize,
    pub linkage: Linkage,
}

/// An `(a, b)`-path system: `a` disjoint spine paths, each carrying an in-set
/// and an out-set of `b` vertices (in path order), and a linkage of size `b`
/// from every out-set to every other in-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub a: usize,
    pub b: usize,
    pub spine: Vec<VertexPath>,
    pub in_sets: Vec<Vec<usize>>,
    pub out_sets: Vec<Vec<usize>>,
    pub linkages: Vec<IndexedLinkage>,
}

impl PathSystem {
    pub fn linkage(&self, from: usize, to: usize) -> Option<&Linkage> {
        self.linkages
            .iter()
            .find(|l| l.from == from && l.to == to)
            .map(|l| &l.linkage)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystemReport {
    pub violations: Vec<String>,
    /// Checks that were skipped, e.g. well-linkedness above the size guard.
    pub warnings: Vec<String>,
}

impl PathSystemReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every path-system condition. Well-linkedness of the `A` sets is
/// only checked up to [`WELL_LINKED_GUARD`] vertices and reported as a
/// warning above it.
pub fn verify_path_system(d: &Digraph, s: &PathSystem) -> PathSystemReport {
    let mut report = PathSystemReport::default();
    let n = d.vertex_count();
    let mut bad = |msg: String| report.violations.push(msg);

    if s.spine.len() != s.a || s.in_sets.len() != s.a || s.out_sets.len() != s.a {
        bad(format!(
            "expected {} spine paths and A sets, found {} paths, {} in-sets, {} out-sets",
            s.a,
            s.spine.len(),
            s.in_sets.len(),
            s.out_sets.len()
        ));
        return report;
    }
    let mut owner = vec![usize::MAX; n];
    for (i, p) in s.spine.iter().enumerate() {
        if let Err(e) = p.validate(d) {
            bad(format!("spine path {i}: {e}"));
            continue;
        }
        for &v in p.vertices() {
            if owner[v] != usize::MAX {
                bad(format!("spine paths {} and {i} share vertex {v}", owner[v]));
            }
            owner[v] = i;
        }
    }
    for i in 0..s.a {
        let (ins, outs) = (&s.in_sets[i], &s.out_sets[i]);
        if ins.len() != s.b || outs.len() != s.b {
            bad(format!(
                "A_{i}^in has {} vertices and A_{i}^out has {}, expected {}",
                ins.len(),
                outs.len(),
                s.b
            ));
        }
        let pos = |v: &usize| s.spine[i].vertices().iter().position(|w| w == v);
        let in_pos: Option<Vec<usize>> = ins.iter().map(pos).collect();
        let out_pos: Option<Vec<usize>> = outs.iter().map(pos).collect();
        match (in_pos, out_pos) {
            (Some(ip), Some(op)) => {
                if let (Some(last_in), Some(first_out)) = (ip.iter().max(), op.iter().min()) {
                    if last_in >= first_out {
                        bad(format!(
                            "on spine path {i} an in-vertex does not precede every out-vertex"
                        ));
                    }
                }
            }
            _ => bad(format!(
                "A_{i}^in or A_{i}^out is not contained in spine path {i}"
            )),
        }
    }
    for i in 0..s.a {
        for j in 0..s.a {
            if i == j {
                continue;
            }
            let Some(l) = s.linkage(i, j) else {
                bad(format!("linkage L_{i},{j} missing"));
                continue;
            };
            if l.len() != s.b {
                bad(format!(
                    "linkage L_{i},{j} has {} paths, expected {}",
                    l.len(),
                    s.b
                ));
            }
            if l.source_set != sorted(&s.out_sets[i]) || l.sink_set != sorted(&s.in_sets[j]) {
                bad(format!(
                    "linkage L_{i},{j} does not run from A_{i}^out to A_{j}^in"
                ));
            }
            if let Err(e) = l.verify(d) {
                bad(format!("linkage L_{i},{j}: {e}"));
            }
        }
    }
    if s.linkages
        .iter()
        .any(|l| l.from == l.to || l.from >= s.a || l.to >= s.a)
    {
        bad("linkage with an invalid index pair".into());
    }
    for (label, sets) in [("in", &s.in_sets), ("out", &s.out_sets)] {
        for (i, set) in sets.iter().enumerate() {
            if set.len() > WELL_LINKED_GUARD {
                report.warnings.push(format!(
                    "well-linkedness of A_{i}^{label} ({} vertices) not checked",
                    set.len()
                ));
                continue;
            }
            match well_linked_witness(d, set) {
                Ok(None) => {}
                Ok(Some((x, y))) => report.violations.push(format!(
                    "A_{i}^{label} is not well-linked: no linkage of size {} from {x:?} to {y:?}",
                    x.len()
                )),
                Err(e) => report.violations.push(format!("A_{i}^{label}: {e}")),
            }
        }
    }
    report
}

fn sorted(v: &[usize]) -> Vec<usize> {
    crate::digraph::vertex_set(v.iter().copied())
}

/// Greedy forward-maximal path from `start`: repeatedly step to the smallest
/// out-neighbour not yet on the path.
pub fn maximal_path(d: &Digraph, start: usize) -> VertexPath {
    let mut on_path = vec![false; d.vertex_count()];
    on_path[start] = true;
    let mut path = vec![start];
    while let Some(&next) = d
        .out_neighbors(*path.last().unwrap())
        .iter()
        .find(|&&w| !on_path[w])
    {
        on_path[next] = true;
        path.push(next);
    }
    VertexPath::new(path)
}

/// Builds a `(k, k)`-path system in a `2k²`-strong digraph: the first `2k²`
/// vertices of a maximal path are cut into `k` blocks of `2k`, each block's
/// first `k` vertices form its in-set and last `k` its out-set, and the
/// linkages come from max-flow. With `check_strong` off, the connectivity
/// precondition is only detected when the path or a linkage comes up short.
pub fn build_path_system(d: &Digraph, k: usize, check_strong: bool) -> Result<PathSystem> {
    if k == 0 {
        return Err(invalid("path system order k must be at least 1"));
    }
    let need = 2 * k * k;
    if d.vertex_count() == 0 {
        return Err(Error::Precondition("empty digraph".into()));
    }
    if check_strong && !is_k_strong(d, need) {
        return Err(Error::Precondition(format!("digraph is not {need}-strong")));
    }
    let path = maximal_path(d, 0);
    if path.len() < need {
        return Err(Error::Precondition(format!(
            "maximal path has {} vertices, fewer than {need}; the digraph is not {need}-strong",
            path.len()
        )));
    }
    let prefix = &path.vertices()[..need];
    let blocks: Vec<&[usize]> = prefix.chunks(2 * k).collect();
    let spine = blocks.iter().map(|b| VertexPath::new(b.to_vec())).collect();
    let in_sets: Vec<Vec<usize>> = blocks.iter().map(|b| b[..k].to_vec()).collect();
    let out_sets: Vec<Vec<usize>> = blocks.iter().map(|b| b[k..].to_vec()).collect();

    let mut linkages = Vec::with_capacity(k * k.saturating_sub(1));
    for (i, out_set) in out_sets.iter().enumerate() {
        for (j, in_set) in in_sets.iter().enumerate() {
            if i == j {
                continue;
            }
            let linkage = max_linkage(d, out_set, in_set)?;
            if linkage.len() < k {
                return Err(Error::Precondition(format!(
                    "only {} disjoint paths from A_{i}^out to A_{j}^in; the digraph is not {need}-strong",
                    linkage.len()
                )));
            }
            linkages.push(IndexedLinkage {
                from: i,
                to: j,
                linkage,
            });
        }
    }
    let system = PathSystem {
        a: k,
        b: k,
        spine,
        in_sets,
        out_sets,
        linkages,
    };
    let report = verify_path_system(d, &system);
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "constructed path system fails verification: {}",
            report.violations.join("; ")
        )));
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_case() {
        let d = Digraph::complete(3);
        let s = build_path_system(&d, 1, true).unwrap();
        assert_eq!(s.spine, vec![VertexPath::new(vec![0, 1])]);
        assert_eq!(s.in_sets, vec![vec![0]]);
        assert_eq!(s.out_sets, vec![vec![1]]);
        assert!(s.linkages.is_empty());
    }

    #[test]
    fn complete_nine_k2() {
        let d = Digraph::complete(9);
        assert!(maximal_path(&d, 0).len() >= 8);
        let s = build_path_system(&d, 2, true).unwrap();
        assert_eq!(s.spine[0].vertices(), &[0, 1, 2, 3]);
        assert_eq!(s.spine[1].vertices(), &[4, 5, 6, 7]);
        assert_eq!(s.linkages.len(), 2);
        assert!(verify_path_system(&d, &s).is_valid());
    }

    #[test]
    fn swapped_order_detected() {
        let d = Digraph::complete(9);
        let mut s = build_path_system(&d, 2, true).unwrap();
        std::mem::swap(&mut s.in_sets[0], &mut s.out_sets[0]);
        let report = verify_path_system(&d, &s);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("precede")));
    }

    #[test]
    fn short_linkage_detected() {
        let d = Digraph::complete(9);
        let mut s = build_path_system(&d, 2, true).unwrap();
        s.linkages[0].linkage.paths.pop();
        assert!(!verify_path_system(&d, &s).is_valid());
    }

    #[test]
    fn weakly_connected_input_rejected() {
        let cycle = Digraph::from_edges(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap();
        assert!(matches!(
            build_path_system(&cycle, 2, true),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            build_path_system(&cycle, 2, false),
            Err(Error::Precondition(_))
        ));
    }
}
