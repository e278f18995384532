use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{vertex_set, Digraph};
use crate::error::{Error, Result};

/// Largest family on which [`bramble_order_exact`] runs its exhaustive search.
pub const ORDER_GUARD_BAGS: usize = 20;

/// Family of vertex sets (bags). Construction normalizes every bag to a
/// sorted set and drops repeated bags, keeping first occurrences in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BrambleRepr", into = "BrambleRepr")]
pub struct Bramble {
    bags: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct BrambleRepr {
    bags: Vec<Vec<usize>>,
}

impl From<BrambleRepr> for Bramble {
    fn from(r: BrambleRepr) -> Self {
        Bramble::from_bags(r.bags)
    }
}

impl From<Bramble> for BrambleRepr {
    fn from(b: Bramble) -> Self {
        BrambleRepr { bags: b.bags }
    }
}

impl Bramble {
    pub fn from_bags(bags: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Bramble {
            bags: normalize_bags(bags),
        }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn congestion(&self) -> usize {
        congestion(&self.bags)
    }

    pub fn vertex_union(&self) -> Vec<usize> {
        vertex_set(self.bags.iter().flatten().copied())
    }

    pub fn verify(&self, d: &Digraph) -> Result<BrambleReport> {
        verify_bramble(d, &self.bags)
    }
}

/// Sorts each bag and removes duplicate bags (first occurrence wins).
pub fn normalize_bags(bags: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for bag in bags {
        let bag = vertex_set(bag);
        if seen.insert(bag.clone()) {
            out.push(bag);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BrambleViolation {
    EmptyFamily,
    EmptyBag { bag: usize },
    NotStronglyConnected { bag: usize },
    DuplicateBags { first: usize, second: usize },
    NotTouching { first: usize, second: usize },
}

impl fmt::Display for BrambleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrambleViolation::EmptyFamily => write!(f, "bag family is empty"),
            BrambleViolation::EmptyBag { bag } => write!(f, "bag {bag} is empty"),
            BrambleViolation::NotStronglyConnected { bag } => {
                write!(f, "bag {bag} does not induce a strongly connected subgraph")
            }
            BrambleViolation::DuplicateBags { first, second } => {
                write!(f, "bags {first} and {second} are equal")
            }
            BrambleViolation::NotTouching { first, second } => write!(
                f,
                "bags {first} and {second} are disjoint and not joined by arcs in both directions"
            ),
        }
    }
}

/// Outcome of [`verify_bramble`]: `violation` names the first failing bag or pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrambleReport {
    pub violation: Option<BrambleViolation>,
}

impl BrambleReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

fn touches(d: &Digraph, x: &[usize], in_y: &[bool]) -> bool {
    if x.iter().any(|&v| in_y[v]) {
        return true;
    }
    let forward = x
        .iter()
        .any(|&u| d.out_neighbors(u).iter().any(|&w| in_y[w]));
    let backward = x
        .iter()
        .any(|&u| d.in_neighbors(u).iter().any(|&w| in_y[w]));
    forward && backward
}

/// Checks every bramble condition on `bags` as given (no normalization).
/// Out-of-range vertices are an input error rather than a violation.
pub fn verify_bramble(d: &Digraph, bags: &[Vec<usize>]) -> Result<BrambleReport> {
    for bag in bags {
        d.check_vertices(bag)?;
    }
    let fail = |v| Ok(BrambleReport { violation: Some(v) });
    if bags.is_empty() {
        return fail(BrambleViolation::EmptyFamily);
    }
    let sets: Vec<Vec<usize>> = bags.iter().map(|b| vertex_set(b.iter().copied())).collect();
    for (i, bag) in sets.iter().enumerate() {
        if bag.is_empty() {
            return fail(BrambleViolation::EmptyBag { bag: i });
        }
        if !d.induces_strong(bag) {
            return fail(BrambleViolation::NotStronglyConnected { bag: i });
        }
    }
    let n = d.vertex_count();
    for j in 0..sets.len() {
        let mut in_j = vec![false; n];
        sets[j].iter().for_each(|&v| in_j[v] = true);
        for i in 0..j {
            if sets[i] == sets[j] {
                return fail(BrambleViolation::DuplicateBags {
                    first: i,
                    second: j,
                });
            }
            if !touches(d, &sets[i], &in_j) {
                return fail(BrambleViolation::NotTouching {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(BrambleReport { violation: None })
}

/// Occurrence count of every vertex over the bags (duplicates removed first).
pub fn occurrence_counts(bags: &[Vec<usize>]) -> std::collections::BTreeMap<usize, usize> {
    let mut counts = std::collections::BTreeMap::new();
    for bag in normalize_bags(bags.iter().cloned()) {
        for v in bag {
            *counts.entry(v).or_insert(0) += 1;
        }
    }
    counts
}

/// Maximum number of bags sharing one vertex, after removing duplicate bags.
pub fn congestion(bags: &[Vec<usize>]) -> usize {
    occurrence_counts(bags).into_values().max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrderOutcome {
    Exact {
        order: usize,
        hitting_set: Vec<usize>,
    },
    ExceedsCap {
        cap: usize,
    },
}

/// Minimum hitting set of the bags by a bounded search tree, searching sizes
/// `0..=size_cap`. Guarded to at most [`ORDER_GUARD_BAGS`] distinct bags.
pub fn bramble_order_exact(
    d: &Digraph,
    bags: &[Vec<usize>],
    size_cap: usize,
) -> Result<OrderOutcome> {
    for bag in bags {
        d.check_vertices(bag)?;
    }
    let bags = normalize_bags(bags.iter().cloned());
    if bags.len() > ORDER_GUARD_BAGS {
        return Err(Error::GuardExceeded(format!(
            "{} bags, exhaustive order search is limited to {ORDER_GUARD_BAGS}",
            bags.len()
        )));
    }
    if let Some(i) = bags.iter().position(|b| b.is_empty()) {
        return Err(Error::InvalidInput(format!(
            "bag {i} is empty and cannot be hit"
        )));
    }
    for budget in 0..=size_cap {
        let mut chosen = Vec::new();
        if hit_within(&bags, budget, &mut chosen) {
            let c = congestion(&bags).max(1);
            let lower = bags.len().div_ceil(c);
            if chosen.len() < lower {
                return Err(Error::Internal(format!(
                    "hitting set of size {} below the counting bound {lower}",
                    chosen.len()
                )));
            }
            let order = chosen.len();
            return Ok(OrderOutcome::Exact {
                order,
                hitting_set: vertex_set(chosen),
            });
        }
    }
    Ok(OrderOutcome::ExceedsCap { cap: size_cap })
}

fn hit_within(bags: &[Vec<usize>], budget: usize, chosen: &mut Vec<usize>) -> bool {
    let Some(bag) = bags.iter().find(|b| !b.iter().any(|v| chosen.contains(v))) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for &v in bag {
        chosen.push(v);
        if hit_within(bags, budget - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bidirected_triangle() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn overlapping_strong_bags() {
        let d = bidirected_triangle();
        assert!(verify_bramble(&d, &[vec![0, 1], vec![1, 2]])
            .unwrap()
            .is_valid());
    }

    #[test]
    fn one_way_touching_fails() {
        let d = Digraph::from_edges(2, [(0, 1)]).unwrap();
        let report = verify_bramble(&d, &[vec![0], vec![1]]).unwrap();
        assert_eq!(
            report.violation,
            Some(BrambleViolation::NotTouching {
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn weak_bag_and_duplicates_flagged() {
        let d = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            verify_bramble(&d, &[vec![0, 1]]).unwrap().violation,
            Some(BrambleViolation::NotStronglyConnected { bag: 0 })
        );
        assert_eq!(
            verify_bramble(&d, &[vec![0, 1, 2], vec![2, 1, 0]])
                .unwrap()
                .violation,
            Some(BrambleViolation::DuplicateBags {
                first: 0,
                second: 1
            })
        );
        assert_eq!(
            verify_bramble(&d, &[]).unwrap().violation,
            Some(BrambleViolation::EmptyFamily)
        );
        assert!(matches!(
            verify_bramble(&d, &[vec![5]]),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
    }

    #[test]
    fn congestion_counts() {
        assert_eq!(congestion(&[vec![0], vec![1], vec![2]]), 1);
        assert_eq!(congestion(&[vec![0, 1], vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(congestion(&[vec![0, 1], vec![1, 2], vec![1]]), 3);
        assert_eq!(congestion(&[]), 0);
    }

    #[test]
    fn constructor_deduplicates() {
        let b = Bramble::from_bags(vec![vec![2, 1], vec![1, 2], vec![3]]);
        assert_eq!(b.bags(), &[vec![1, 2], vec![3]]);
    }

    #[test]
    fn order_of_disjoint_bags() {
        let d = Digraph::complete(6);
        let bags: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
        assert_eq!(
            bramble_order_exact(&d, &bags, 10).unwrap(),
            OrderOutcome::Exact {
                order: 6,
                hitting_set: (0..6).collect()
            }
        );
        assert_eq!(
            bramble_order_exact(&d, &bags, 3).unwrap(),
            OrderOutcome::ExceedsCap { cap: 3 }
        );
    }

    #[test]
    fn order_guard() {
        let d = Digraph::complete(25);
        let bags: Vec<Vec<usize>> = (0..25).map(|v| vec![v]).collect();
        assert!(matches!(
            bramble_order_exact(&d, &bags, 30),
            Err(Error::GuardExceeded(_))
        ));
    }
}
