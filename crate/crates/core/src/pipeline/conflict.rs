use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lll::{build_intersection_graph, degeneracy, UGraph};

/// Linkage family `L'_{i,j}` for the ordered pair `(i, j)`, as vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageFamily {
    pub pair: (usize, usize),
    pub paths: Vec<Vec<usize>>,
}

/// Conflict graphs on the family indices: `h1` (resp. `h2`) joins two
/// families whose joint intersection graph has degeneracy above `d1`
/// (resp. `d2`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictGraphs {
    pub pairs: Vec<(usize, usize)>,
    pub d1: u64,
    pub d2: u64,
    pub h1: UGraph,
    pub h2: UGraph,
    /// Degeneracy of the intersection graph of every unordered family pair
    /// `(p, q)`, `p < q`, in lexicographic order.
    pub pair_degeneracy: Vec<(usize, usize, usize)>,
}

/// Degeneracy of the intersection graph of the union of two families.
pub fn joint_degeneracy(a: &LinkageFamily, b: &LinkageFamily) -> usize {
    degeneracy(&build_intersection_graph(&[a.paths.clone(), b.paths.clone()]).graph).0
}

pub fn build_conflict_graphs(
    families: &[LinkageFamily],
    d1: u64,
    d2: u64,
) -> Result<ConflictGraphs> {
    if d1 < d2 {
        return Err(invalid(format!("d1 = {d1} must be at least d2 = {d2}")));
    }
    let pairs: Vec<(usize, usize)> = families.iter().map(|f| f.pair).collect();
    if let Some(&(i, j)) = pairs.iter().find(|(i, j)| i == j) {
        return Err(invalid(format!(
            "pair ({i}, {j}) is not an ordered pair of distinct indices"
        )));
    }
    let mut sorted = pairs.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("a pair is listed twice"));
    }
    let m = families.len();
    let (mut h1, mut h2) = (UGraph::new(m), UGraph::new(m));
    let mut pair_degeneracy = Vec::new();
    for p in 0..m {
        for q in p + 1..m {
            let dg = joint_degeneracy(&families[p], &families[q]);
            pair_degeneracy.push((p, q, dg));
            if dg as u64 > d1 {
                h1.add_edge(p, q)?;
            }
            if dg as u64 > d2 {
                h2.add_edge(p, q)?;
            }
        }
    }
    Ok(ConflictGraphs {
        pairs,
        d1,
        d2,
        h1,
        h2,
        pair_degeneracy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(pair: (usize, usize), paths: Vec<Vec<usize>>) -> LinkageFamily {
        LinkageFamily { pair, paths }
    }

    #[test]
    fn disjoint_families_have_no_conflicts() {
        let fams = vec![
            family((0, 1), vec![vec![0, 1], vec![2, 3]]),
            family((1, 0), vec![vec![4, 5], vec![6]]),
        ];
        let g = build_conflict_graphs(&fams, 1, 0).unwrap();
        assert_eq!(g.h1.edge_count() + g.h2.edge_count(), 0);
        assert_eq!(g.pair_degeneracy, vec![(0, 1, 0)]);
    }

    #[test]
    fn shared_hub_gives_clique() {
        // Six paths through vertex 9: a 6-clique of degeneracy 5.
        let fams = vec![
            family((0, 1), (0..3).map(|i| vec![i, 9]).collect()),
            family((1, 2), (3..6).map(|i| vec![9, i]).collect()),
        ];
        let g = build_conflict_graphs(&fams, 5, 4).unwrap();
        assert_eq!(g.h1.edge_count(), 0);
        assert!(g.h2.has_edge(0, 1));
        assert!(build_conflict_graphs(&fams, 2, 4).is_err());
    }
}
