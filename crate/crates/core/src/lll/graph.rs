use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::digraph::vertex_set;
use crate::error::{Error, Result};

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "UGraphRepr", into = "UGraphRepr")]
pub struct UGraph {
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct UGraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<UGraphRepr> for UGraph {
    type Error = Error;

    fn try_from(r: UGraphRepr) -> Result<Self> {
        UGraph::from_edges(r.n, r.edges)
    }
}

impl From<UGraph> for UGraphRepr {
    fn from(g: UGraph) -> Self {
        UGraphRepr {
            n: g.vertex_count(),
            edges: g.edges(),
        }
    }
}

impl UGraph {
    pub fn new(n: usize) -> Self {
        UGraph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Self-loops are rejected; repeated edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = UGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        UGraph {
            adj: (0..n)
                .map(|v| (0..n).filter(|&w| w != v).collect())
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.vertex_count();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> UGraph {
        let pos: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut nb: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|w| pos.get(w).copied())
                    .collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        UGraph { adj }
    }
}

/// Degeneracy by repeated removal of a minimum-degree vertex (smallest index
/// on ties). Returns the largest degree seen at removal and the removal order.
pub fn degeneracy(g: &UGraph) -> (usize, Vec<usize>) {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while let Some((dv, v)) = queue.pop_first() {
        d = d.max(dv);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    (d, order)
}

/// Largest number of later neighbours of any vertex when `order` is replayed.
/// Equals the degeneracy when `order` comes from [`degeneracy`].
pub fn order_width(g: &UGraph, order: &[usize]) -> usize {
    let mut rank = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    order
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| rank[w] > rank[v])
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Member `index` of family `family`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MemberRef {
    pub family: usize,
    pub index: usize,
}

/// Graph on the members of several families; two members are adjacent iff
/// their vertex sets intersect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionGraph {
    pub members: Vec<MemberRef>,
    /// Sorted vertex set of each member.
    pub sets: Vec<Vec<usize>>,
    pub graph: UGraph,
}

impl IntersectionGraph {
    /// Recomputes adjacency of `u` and `v` from the member sets.
    pub fn sets_intersect(&self, u: usize, v: usize) -> bool {
        let (a, b) = (&self.sets[u], &self.sets[v]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// Members are numbered family by family. Adjacency comes from an index of
/// the members through each vertex, so the cost is the sum over vertices of
/// the squared number of members through it.
pub fn build_intersection_graph(families: &[Vec<Vec<usize>>]) -> IntersectionGraph {
    let mut members = Vec::new();
    let mut sets = Vec::new();
    for (f, family) in families.iter().enumerate() {
        for (i, m) in family.iter().enumerate() {
            members.push(MemberRef {
                family: f,
                index: i,
            });
            sets.push(vertex_set(m.iter().copied()));
        }
    }
    let mut through: HashMap<usize, Vec<usize>> = HashMap::new();
    for (id, set) in sets.iter().enumerate() {
        for &v in set {
            through.entry(v).or_default().push(id);
        }
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); sets.len()];
    for ids in through.values() {
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    let graph = UGraph {
        adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
    };
    IntersectionGraph {
        members,
        sets,
        graph,
    }
}
