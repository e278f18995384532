//! Vertex-capacitated unit flow: every vertex `v` is split into
//! `v_in -> v_out` with capacity one, arcs keep unbounded capacity, so a
//! minimum cut consists of vertices only.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{vertex_set, Digraph, VertexPath};
use crate::error::{invalid, Error, Result};

struct SplitNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    source: usize,
    sink: usize,
}

const UNBOUNDED: u32 = u32::MAX / 2;

impl SplitNetwork {
    fn v_in(v: usize) -> usize {
        2 * v
    }

    fn v_out(v: usize) -> usize {
        2 * v + 1
    }

    fn build(d: &Digraph, sources: &[usize], sinks: &[usize], blocked: &[bool]) -> Self {
        let n = d.vertex_count();
        let mut net = SplitNetwork {
            adj: vec![Vec::new(); 2 * n + 2],
            to: Vec::new(),
            cap: Vec::new(),
            source: 2 * n,
            sink: 2 * n + 1,
        };
        for (v, &off) in blocked.iter().enumerate().take(n) {
            if !off {
                net.arc(Self::v_in(v), Self::v_out(v), 1);
            }
        }
        for (u, v) in d.edges() {
            if !blocked[u] && !blocked[v] {
                net.arc(Self::v_out(u), Self::v_in(v), UNBOUNDED);
            }
        }
        for &a in sources {
            if !blocked[a] {
                net.arc(net.source, Self::v_in(a), UNBOUNDED);
            }
        }
        for &b in sinks {
            if !blocked[b] {
                net.arc(Self::v_out(b), net.sink, UNBOUNDED);
            }
        }
        net
    }

    fn arc(&mut self, u: usize, v: usize, c: u32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Saturates up to `limit` units with shortest augmenting paths.
    fn run(&mut self, limit: usize) -> usize {
        let nodes = self.adj.len();
        let mut flow = 0;
        let mut pred_arc = vec![usize::MAX; nodes];
        while flow < limit {
            pred_arc.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::from([self.source]);
            let mut found = false;
            'bfs: while let Some(x) = queue.pop_front() {
                for &e in &self.adj[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && y != self.source && pred_arc[y] == usize::MAX {
                        pred_arc[y] = e;
                        if y == self.sink {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if !found {
                break;
            }
            let mut y = self.sink;
            while y != self.source {
                let e = pred_arc[y];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                y = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }

    fn residual_reach(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[self.source] = true;
        let mut stack = vec![self.source];
        while let Some(x) = stack.pop() {
            for &e in &self.adj[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Flow carried by forward arc `e` (forward arcs have even ids).
    fn carried(&self, e: usize) -> u32 {
        self.cap[e ^ 1]
    }

    fn decompose(&self) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        for &e in &self.adj[self.source] {
            if e % 2 != 0 || self.carried(e) == 0 {
                continue;
            }
            let mut v = self.to[e] / 2;
            let mut path = vec![v];
            loop {
                let out = Self::v_out(v);
                let next = self.adj[out]
                    .iter()
                    .copied()
                    .find(|&f| f % 2 == 0 && self.carried(f) > 0)
                    .expect("flow conservation at a split vertex");
                let y = self.to[next];
                if y == self.sink {
                    break;
                }
                v = y / 2;
                path.push(v);
            }
            paths.push(path);
        }
        paths
    }
}

/// Maximum set of vertex-disjoint `A -> B` paths together with a vertex
/// separator of the same size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorCertificate {
    pub source_set: Vec<usize>,
    pub sink_set: Vec<usize>,
    pub paths: Vec<VertexPath>,
    pub separator: Vec<usize>,
}

impl SeparatorCertificate {
    pub fn value(&self) -> usize {
        self.paths.len()
    }

    /// Re-checks the certificate against `d`: disjoint valid `A -> B` paths,
    /// equal cardinalities, and no `A -> B` path surviving deletion of the
    /// separator.
    pub fn verify(&self, d: &Digraph) -> Result<(), String> {
        let n = d.vertex_count();
        let in_range = |vs: &[usize]| vs.iter().all(|&v| v < n);
        if !in_range(&self.source_set) || !in_range(&self.sink_set) || !in_range(&self.separator) {
            return Err("vertex out of range".into());
        }
        if self.paths.len() != self.separator.len() {
            return Err(format!(
                "{} paths but separator of size {}",
                self.paths.len(),
                self.separator.len()
            ));
        }
        let mut used = vec![false; n];
        for (i, p) in self.paths.iter().enumerate() {
            p.validate(d).map_err(|e| format!("path {i}: {e}"))?;
            let (first, last) = (p.first().unwrap(), p.last().unwrap());
            if !self.source_set.contains(&first) || !self.sink_set.contains(&last) {
                return Err(format!(
                    "path {i} does not run from the source set to the sink set"
                ));
            }
            for &v in p.vertices() {
                if std::mem::replace(&mut used[v], true) {
                    return Err(format!("vertex {v} shared by two paths"));
                }
            }
        }
        let mut blocked = vec![false; n];
        for &x in &self.separator {
            blocked[x] = true;
        }
        let reach = d.reachable_avoiding(&self.source_set, &blocked);
        if let Some(&b) = self.sink_set.iter().find(|&&b| reach[b]) {
            return Err(format!(
                "sink {b} still reachable after deleting the separator"
            ));
        }
        Ok(())
    }
}

fn check_terminal_set(d: &Digraph, set: &[usize], name: &str) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(invalid(format!("{name} set is empty")));
    }
    d.check_vertices(set)?;
    Ok(vertex_set(set.iter().copied()))
}

/// Menger: a maximum family of pairwise vertex-disjoint `A -> B` paths and a
/// minimum `(A,B)`-separator of equal size. A vertex of `A ∩ B` contributes a
/// one-vertex path.
pub fn menger_paths_and_separator(
    d: &Digraph,
    a: &[usize],
    b: &[usize],
) -> Result<SeparatorCertificate> {
    let a = check_terminal_set(d, a, "source")?;
    let b = check_terminal_set(d, b, "sink")?;
    let n = d.vertex_count();
    let mut net = SplitNetwork::build(d, &a, &b, &vec![false; n]);
    let value = net.run(usize::MAX);

    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    a.iter().for_each(|&v| in_a[v] = true);
    b.iter().for_each(|&v| in_b[v] = true);
    let mut paths: Vec<VertexPath> = net
        .decompose()
        .into_iter()
        .map(|p| {
            // Shortcut to a clean A -> B path: last A-vertex up to the first
            // B-vertex after it. Disjointness is preserved.
            let start = p.iter().rposition(|&v| in_a[v]).expect("path starts in A");
            let len = p[start..]
                .iter()
                .position(|&v| in_b[v])
                .expect("path ends in B")
                + 1;
            VertexPath::new(p[start..start + len].to_vec())
        })
        .collect();
    paths.sort();

    let reach = net.residual_reach();
    let separator: Vec<usize> = (0..n)
        .filter(|&v| reach[SplitNetwork::v_in(v)] && !reach[SplitNetwork::v_out(v)])
        .collect();
    if separator.len() != value || paths.len() != value {
        return Err(Error::Internal(format!(
            "flow value {value}, {} paths, separator {}",
            paths.len(),
            separator.len()
        )));
    }
    Ok(SeparatorCertificate {
        source_set: a,
        sink_set: b,
        paths,
        separator,
    })
}

/// Number of internally disjoint `u -> v` paths, capped at `limit`.
/// Only meaningful when `u -> v` is not an arc.
pub fn local_connectivity(d: &Digraph, u: usize, v: usize, limit: usize) -> usize {
    let mut blocked = vec![false; d.vertex_count()];
    blocked[u] = true;
    blocked[v] = true;
    let mut net = SplitNetwork::build(d, d.out_neighbors(u), d.in_neighbors(v), &blocked);
    net.run(limit)
}

/// Vertex connectivity `κ(D)`: the largest `k` with `D` k-strong. Uses the
/// pair cover in which vertex `i` is probed against all others only while
/// `i <= κ` holds for the current bound; complete digraphs give `n - 1`.
pub fn strong_connectivity(d: &Digraph) -> Result<usize> {
    let n = d.vertex_count();
    if n <= 1 {
        return Err(invalid("strong connectivity needs at least two vertices"));
    }
    if !d.is_strong() {
        return Ok(0);
    }
    let mut best = n - 1;
    let mut i = 0;
    while i <= best && i < n {
        for j in 0..n {
            if j == i {
                continue;
            }
            if !d.has_edge(i, j) {
                best = best.min(local_connectivity(d, i, j, best));
            }
            if !d.has_edge(j, i) {
                best = best.min(local_connectivity(d, j, i, best));
            }
        }
        i += 1;
    }
    Ok(best)
}

/// Whether `D` has at least `k + 1` vertices and no separator of size `< k`.
pub fn is_k_strong(d: &Digraph, k: usize) -> bool {
    let n = d.vertex_count();
    if n < k + 1 {
        return false;
    }
    if k == 0 {
        return true;
    }
    strong_connectivity(d)
        .map(|kappa| kappa >= k)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn single_route() {
        let d = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let cert = menger_paths_and_separator(&d, &[0], &[2]).unwrap();
        assert_eq!(cert.value(), 1);
        assert_eq!(cert.paths[0].vertices(), &[0, 1, 2]);
        assert_eq!(cert.separator.len(), 1);
        cert.verify(&d).unwrap();
    }

    #[test]
    fn overlap_counts_trivial_paths() {
        let d = Digraph::from_edges(3, [(0, 1)]).unwrap();
        let cert = menger_paths_and_separator(&d, &[0, 2], &[1, 2]).unwrap();
        assert_eq!(cert.value(), 2);
        assert!(cert.paths.contains(&VertexPath::trivial(2)));
        cert.verify(&d).unwrap();
    }

    #[test]
    fn empty_sets_rejected() {
        let d = cycle(3);
        assert!(matches!(
            menger_paths_and_separator(&d, &[], &[1]),
            Err(Error::InvalidInput(_))
        ));
        assert!(menger_paths_and_separator(&d, &[0], &[]).is_err());
        assert!(matches!(
            menger_paths_and_separator(&d, &[0], &[7]),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn paths_are_clean_after_shortcut() {
        // 0 -> 1 -> 2 with A = {0, 1}: the flow may route through 1 from 0.
        let d = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let cert = menger_paths_and_separator(&d, &[0, 1], &[2]).unwrap();
        assert_eq!(cert.value(), 1);
        assert_eq!(cert.paths[0].vertices(), &[1, 2]);
    }

    #[test]
    fn connectivity_of_standard_families() {
        assert_eq!(strong_connectivity(&Digraph::complete(9)).unwrap(), 8);
        assert_eq!(strong_connectivity(&Digraph::complete(2)).unwrap(), 1);
        assert_eq!(strong_connectivity(&cycle(5)).unwrap(), 1);
        let d = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(strong_connectivity(&d).unwrap(), 0);
        assert!(strong_connectivity(&Digraph::new(1)).is_err());
    }

    #[test]
    fn k_strong_predicate() {
        assert!(is_k_strong(&Digraph::complete(9), 8));
        assert!(!is_k_strong(&Digraph::complete(9), 9));
        assert!(!is_k_strong(&cycle(5), 2));
        assert!(is_k_strong(&cycle(5), 1));
        assert!(is_k_strong(&Digraph::new(1), 0));
        assert!(!is_k_strong(&Digraph::new(0), 0));
    }
}
