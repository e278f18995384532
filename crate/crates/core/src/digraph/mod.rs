//! Simple loop-free digraphs on dense vertex indices `0..n`, vertex paths,
//! strong components and vertex-capacitated flow.
//!
//! Parallel arcs are merged and loops dropped on ingestion: none of the
//! algorithms in this crate distinguish them.

mod flow;
mod scc;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use flow::{
    is_k_strong, local_connectivity, menger_paths_and_separator, strong_connectivity,
    SeparatorCertificate,
};
pub use scc::strong_components;

/// Directed graph with sorted, duplicate-free out- and in-adjacency lists.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "DigraphRepr", into = "DigraphRepr")]
pub struct Digraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<DigraphRepr> for Digraph {
    type Error = Error;

    fn try_from(repr: DigraphRepr) -> Result<Self> {
        Digraph::from_edges(repr.n, repr.edges)
    }
}

impl From<Digraph> for DigraphRepr {
    fn from(d: Digraph) -> Self {
        DigraphRepr {
            n: d.vertex_count(),
            edges: d.edges().collect(),
        }
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// Edgeless digraph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::new(n);
        for (u, v) in edges {
            d.add_edge(u, v)?;
        }
        Ok(d)
    }

    /// Complete digraph: every ordered pair of distinct vertices is an arc.
    pub fn complete(n: usize) -> Self {
        let mut d = Digraph::new(n);
        for u in 0..n {
            d.out_adj[u] = (0..n).filter(|&v| v != u).collect();
            d.in_adj[u] = d.out_adj[u].clone();
        }
        d.edge_count = n * n.saturating_sub(1);
        d
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn add_vertex(&mut self) -> usize {
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.out_adj.len() - 1
    }

    /// Inserts the arc `u -> v`. Returns `false` when the arc is a loop or
    /// already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(false);
        }
        match self.out_adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.out_adj[u].insert(pos, v);
                let pos = self.in_adj[v].binary_search(&u).unwrap_err();
                self.in_adj[v].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// All arcs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.vertex_count()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.vertex_count(),
            })
        }
    }

    pub fn check_vertices<'a>(&self, vs: impl IntoIterator<Item = &'a usize>) -> Result<()> {
        vs.into_iter().try_for_each(|&v| self.check_vertex(v))
    }

    /// Vertices reachable from `sources` without entering a `blocked` vertex.
    /// Blocked sources are not expanded.
    pub fn reachable_avoiding(&self, sources: &[usize], blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if !blocked[s] && !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.out_adj[u] {
                if !seen[w] && !blocked[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        self.reachable_avoiding(sources, &vec![false; self.vertex_count()])
    }

    /// Shortest path from `s` to `t` avoiding blocked vertices, if any.
    pub fn shortest_path_avoiding(
        &self,
        s: usize,
        t: usize,
        blocked: &[bool],
    ) -> Option<VertexPath> {
        if blocked[s] || blocked[t] {
            return None;
        }
        let n = self.vertex_count();
        let mut pred = vec![usize::MAX; n];
        pred[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                let mut path = vec![t];
                let mut cur = t;
                while cur != s {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(VertexPath(path));
            }
            for &w in &self.out_adj[u] {
                if pred[w] == usize::MAX && !blocked[w] {
                    pred[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Whether the whole digraph is strongly connected. The empty digraph is not.
    pub fn is_strong(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let fwd = self.reachable_from(&[0]);
        if fwd.iter().any(|&r| !r) {
            return false;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for &w in &self.in_adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|r| r)
    }

    /// Whether `vertices` induces a strongly connected subgraph. A single
    /// vertex is strong; the empty set is not.
    pub fn induces_strong(&self, vertices: &[usize]) -> bool {
        let Some(&root) = vertices.first() else {
            return false;
        };
        let n = self.vertex_count();
        let mut inside = vec![false; n];
        for &v in vertices {
            inside[v] = true;
        }
        let count = inside.iter().filter(|&&b| b).count();
        let sweep = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut stack = vec![root];
            let mut hits = 1;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        hits += 1;
                        stack.push(w);
                    }
                }
            }
            hits
        };
        sweep(&self.out_adj) == count && sweep(&self.in_adj) == count
    }

    /// Copy with the given vertices (and their arcs) removed; vertex indices
    /// are preserved, removed vertices become isolated.
    pub fn isolate(&self, removed: &[bool]) -> Digraph {
        let edges = self
            .edges()
            .filter(|&(u, v)| !removed[u] && !removed[v])
            .collect::<Vec<_>>();
        Digraph::from_edges(self.vertex_count(), edges).expect("indices already validated")
    }
}

/// Non-empty sequence of distinct vertices, consecutive ones joined by arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexPath(Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathDefect {
    Empty,
    OutOfRange(usize),
    RepeatedVertex(usize),
    MissingArc(usize, usize),
}

impl fmt::Display for PathDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathDefect::Empty => write!(f, "empty path"),
            PathDefect::OutOfRange(v) => write!(f, "vertex {v} out of range"),
            PathDefect::RepeatedVertex(v) => write!(f, "vertex {v} repeated"),
            PathDefect::MissingArc(u, v) => write!(f, "arc ({u},{v}) missing"),
        }
    }
}

impl VertexPath {
    /// Wraps a vertex sequence without checking it against a host.
    pub fn new(vertices: Vec<usize>) -> Self {
        VertexPath(vertices)
    }

    pub fn trivial(v: usize) -> Self {
        VertexPath(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn validate(&self, host: &Digraph) -> Result<(), PathDefect> {
        if self.0.is_empty() {
            return Err(PathDefect::Empty);
        }
        let n = host.vertex_count();
        let mut seen = vec![false; n];
        for &v in &self.0 {
            if v >= n {
                return Err(PathDefect::OutOfRange(v));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(PathDefect::RepeatedVertex(v));
            }
        }
        for w in self.0.windows(2) {
            if !host.has_edge(w[0], w[1]) {
                return Err(PathDefect::MissingArc(w[0], w[1]));
            }
        }
        Ok(())
    }

    pub fn is_valid_in(&self, host: &Digraph) -> bool {
        self.validate(host).is_ok()
    }
}

impl From<Vec<usize>> for VertexPath {
    fn from(v: Vec<usize>) -> Self {
        VertexPath(v)
    }
}

/// Normalizes a vertex set: sorted, duplicates removed.
pub fn vertex_set(vs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = vs.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}
