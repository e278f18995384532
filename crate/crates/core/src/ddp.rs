//! Disjoint paths with congestion: route `k` ordered terminal pairs so that
//! every vertex lies on at most `budget` of the paths.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::digraph::{
    menger_paths_and_separator, vertex_set, Digraph, SeparatorCertificate, VertexPath,
};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdpInstance {
    pub host: Digraph,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub budget: usize,
}

impl DdpInstance {
    pub fn new(
        host: Digraph,
        sources: Vec<usize>,
        sinks: Vec<usize>,
        budget: usize,
    ) -> Result<Self> {
        let inst = DdpInstance {
            host,
            sources,
            sinks,
            budget,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// `k >= 1` pairs, distinct sources, distinct sinks, no vertex both a
    /// source and a sink, `budget >= 1`.
    pub fn validate(&self) -> Result<()> {
        if self.sources.is_empty() {
            return Err(invalid("at least one terminal pair is required"));
        }
        if self.sources.len() != self.sinks.len() {
            return Err(invalid(format!(
                "{} sources but {} sinks",
                self.sources.len(),
                self.sinks.len()
            )));
        }
        if self.budget == 0 {
            return Err(invalid("congestion budget must be at least 1"));
        }
        self.host.check_vertices(&self.sources)?;
        self.host.check_vertices(&self.sinks)?;
        let k = self.k();
        if vertex_set(self.sources.iter().copied()).len() != k
            || vertex_set(self.sinks.iter().copied()).len() != k
        {
            return Err(invalid("sources and sinks must each be pairwise distinct"));
        }
        if let Some(v) = self.sources.iter().find(|v| self.sinks.contains(v)) {
            return Err(invalid(format!("vertex {v} is both a source and a sink")));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.sources.len()
    }
}

/// `k` paths plus the number of paths through each used vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdpSolution {
    pub paths: Vec<VertexPath>,
    pub loads: BTreeMap<usize, usize>,
}

impl DdpSolution {
    pub fn from_paths(paths: Vec<VertexPath>) -> Self {
        let mut loads = BTreeMap::new();
        for p in &paths {
            for &v in p.vertices() {
                *loads.entry(v).or_insert(0) += 1;
            }
        }
        DdpSolution { paths, loads }
    }

    pub fn max_load(&self) -> usize {
        self.loads.values().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub violations: Vec<String>,
    pub max_load: usize,
}

impl SolutionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks pair count, endpoints, path validity and per-vertex load.
pub fn verify_solution(inst: &DdpInstance, paths: &[VertexPath]) -> SolutionReport {
    let mut report = SolutionReport::default();
    if paths.len() != inst.k() {
        report.violations.push(format!(
            "{} paths for {} terminal pairs",
            paths.len(),
            inst.k()
        ));
    }
    let mut load = vec![0usize; inst.host.vertex_count()];
    for (i, p) in paths.iter().enumerate() {
        if let Err(e) = p.validate(&inst.host) {
            report.violations.push(format!("path {i}: {e}"));
            continue;
        }
        if i < inst.k() && (p.first() != Some(inst.sources[i]) || p.last() != Some(inst.sinks[i])) {
            report.violations.push(format!(
                "path {i} runs {:?} -> {:?}, expected {} -> {}",
                p.first(),
                p.last(),
                inst.sources[i],
                inst.sinks[i]
            ));
        }
        for &v in p.vertices() {
            load[v] += 1;
        }
    }
    report.max_load = load.iter().copied().max().unwrap_or(0);
    if let Some(v) = (0..load.len()).find(|&v| load[v] > inst.budget) {
        report.violations.push(format!(
            "vertex {v} lies on {} paths, budget {}",
            load[v], inst.budget
        ));
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SolveOutcome {
    Solved { solution: DdpSolution, nodes: u64 },
    Infeasible { nodes: u64 },
    CapExceeded { nodes: u64 },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&DdpSolution> {
        match self {
            SolveOutcome::Solved { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

enum Step {
    Found,
    Exhausted,
    Cap,
}

struct Search<'a> {
    inst: &'a DdpInstance,
    cap: u64,
    nodes: u64,
    load: Vec<usize>,
    paths: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn usable(&self, v: usize) -> bool {
        self.load[v] < self.inst.budget
    }

    /// Every pair from `from` on can still be connected through vertices
    /// with spare load.
    fn later_pairs_reachable(&self, from: usize) -> bool {
        let blocked: Vec<bool> = (0..self.load.len()).map(|v| !self.usable(v)).collect();
        (from..self.inst.k()).all(|j| {
            let (s, t) = (self.inst.sources[j], self.inst.sinks[j]);
            self.inst.host.reachable_avoiding(&[s], &blocked)[t]
        })
    }

    /// BFS distances to `t` along reversed arcs through usable vertices not
    /// on the current path.
    fn distances_to(&self, t: usize, on_path: &[bool]) -> Vec<usize> {
        let host = &self.inst.host;
        let mut dist = vec![usize::MAX; host.vertex_count()];
        if !self.usable(t) {
            return dist;
        }
        dist[t] = 0;
        let mut queue = VecDeque::from([t]);
        while let Some(x) = queue.pop_front() {
            for &w in host.in_neighbors(x) {
                if dist[w] == usize::MAX && !on_path[w] && self.usable(w) {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn route_pair(&mut self, i: usize) -> Step {
        if i == self.inst.k() {
            return Step::Found;
        }
        let s = self.inst.sources[i];
        if !self.usable(s) {
            return Step::Exhausted;
        }
        let mut on_path = vec![false; self.load.len()];
        on_path[s] = true;
        self.load[s] += 1;
        self.paths[i].push(s);
        let step = self.extend(i, &mut on_path);
        if !matches!(step, Step::Found) {
            self.paths[i].pop();
            self.load[s] -= 1;
        }
        step
    }

    fn extend(&mut self, i: usize, on_path: &mut [bool]) -> Step {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Step::Cap;
        }
        if !self.later_pairs_reachable(i + 1) {
            return Step::Exhausted;
        }
        let u = *self.paths[i].last().unwrap();
        let t = self.inst.sinks[i];
        if u == t {
            return self.route_pair(i + 1);
        }
        let dist = self.distances_to(t, on_path);
        let mut candidates: Vec<(usize, usize)> = self
            .inst
            .host
            .out_neighbors(u)
            .iter()
            .filter(|&&w| !on_path[w] && dist[w] != usize::MAX)
            .map(|&w| (dist[w], w))
            .collect();
        candidates.sort_unstable();
        for (_, w) in candidates {
            on_path[w] = true;
            self.load[w] += 1;
            self.paths[i].push(w);
            match self.extend(i, on_path) {
                Step::Found => return Step::Found,
                Step::Cap => return Step::Cap,
                Step::Exhausted => {}
            }
            self.paths[i].pop();
            self.load[w] -= 1;
            on_path[w] = false;
        }
        Step::Exhausted
    }
}

/// Exact backtracking solver. Pairs are routed in the given order, one path
/// at a time, with partial paths abandoned as soon as their own sink or a
/// later pair becomes unreachable through vertices with spare load.
/// Neighbours are tried closest-to-sink first. `Infeasible` is only returned
/// after the whole search space is exhausted; `node_cap` bounds the number of
/// search nodes.
pub fn solve_exact(inst: &DdpInstance, node_cap: u64) -> SolveOutcome {
    let k = inst.k();
    let n = inst.host.vertex_count();
    if inst.budget >= k {
        // Every vertex can be on every path: plain reachability decides.
        let none = vec![false; n];
        let paths: Option<Vec<VertexPath>> = (0..k)
            .map(|i| {
                inst.host
                    .shortest_path_avoiding(inst.sources[i], inst.sinks[i], &none)
            })
            .collect();
        return match paths {
            Some(paths) => SolveOutcome::Solved {
                solution: DdpSolution::from_paths(paths),
                nodes: k as u64,
            },
            None => SolveOutcome::Infeasible { nodes: k as u64 },
        };
    }
    let mut search = Search {
        inst,
        cap: node_cap,
        nodes: 0,
        load: vec![0; n],
        paths: vec![Vec::new(); k],
    };
    match search.route_pair(0) {
        Step::Found => SolveOutcome::Solved {
            solution: DdpSolution::from_paths(
                search.paths.into_iter().map(VertexPath::new).collect(),
            ),
            nodes: search.nodes,
        },
        Step::Exhausted => SolveOutcome::Infeasible {
            nodes: search.nodes,
        },
        Step::Cap => SolveOutcome::CapExceeded {
            nodes: search.nodes,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockedSide {
    /// The separator meets every path from the sources to the bags.
    SourcesToBags,
    /// The separator meets every path from the bags to the sinks.
    BagsToSinks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorEvidence {
    pub side: BlockedSide,
    pub separator: Vec<usize>,
    pub certificate: SeparatorCertificate,
}

impl SeparatorEvidence {
    /// The separator is small (`< k`) and deleting it kills the blocked
    /// side's reachability.
    pub fn verify(&self, d: &Digraph, k: usize) -> Result<(), String> {
        if self.separator.len() >= k {
            return Err(format!(
                "separator of size {} is not below k = {k}",
                self.separator.len()
            ));
        }
        if self.separator != self.certificate.separator {
            return Err("separator differs from its certificate".into());
        }
        self.certificate.verify(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Dichotomy {
    /// At least `k` disjoint paths from the sources into the bags and from
    /// the bags to the sinks; no small separator exists.
    Linked {
        into_bags: SeparatorCertificate,
        out_of_bags: SeparatorCertificate,
    },
    Separated(SeparatorEvidence),
}

/// Menger check on both sides of the bag union: either `k` disjoint paths
/// sources -> bags and bags -> sinks, or a separator of size `< k` with the
/// side it blocks.
pub fn dichotomy_check(
    d: &Digraph,
    bags: &[Vec<usize>],
    sources: &[usize],
    sinks: &[usize],
    k: usize,
) -> Result<Dichotomy> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let union = vertex_set(bags.iter().flatten().copied());
    if union.is_empty() {
        return Err(invalid("bag family covers no vertex"));
    }
    let into_bags = menger_paths_and_separator(d, sources, &union)?;
    if into_bags.value() < k {
        return Ok(Dichotomy::Separated(SeparatorEvidence {
            side: BlockedSide::SourcesToBags,
            separator: into_bags.separator.clone(),
            certificate: into_bags,
        }));
    }
    let out_of_bags = menger_paths_and_separator(d, &union, sinks)?;
    if out_of_bags.value() < k {
        return Ok(Dichotomy::Separated(SeparatorEvidence {
            side: BlockedSide::BagsToSinks,
            separator: out_of_bags.separator.clone(),
            certificate: out_of_bags,
        }));
    }
    Ok(Dichotomy::Linked {
        into_bags,
        out_of_bags,
    })
}
