use serde::{Deserialize, Serialize};

use crate::digraph::{menger_paths_and_separator, vertex_set, Digraph, VertexPath};
use crate::error::{Error, Result};

/// Largest set on which [`is_well_linked`] enumerates all balanced pairs.
pub const WELL_LINKED_GUARD: usize = 8;

/// Pairwise vertex-disjoint paths from `source_set` to `sink_set`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub source_set: Vec<usize>,
    pub sink_set: Vec<usize>,
    pub paths: Vec<VertexPath>,
}

impl Linkage {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn verify(&self, d: &Digraph) -> Result<(), String> {
        let mut used = vec![false; d.vertex_count()];
        for (i, p) in self.paths.iter().enumerate() {
            p.validate(d).map_err(|e| format!("path {i}: {e}"))?;
            if !self.source_set.contains(&p.first().unwrap()) {
                return Err(format!("path {i} does not start in the source set"));
            }
            if !self.sink_set.contains(&p.last().unwrap()) {
                return Err(format!("path {i} does not end in the sink set"));
            }
            for &v in p.vertices() {
                if std::mem::replace(&mut used[v], true) {
                    return Err(format!("vertex {v} used by two paths"));
                }
            }
        }
        Ok(())
    }
}

/// Largest linkage from `x` to `y`, taken from a Menger certificate.
pub fn max_linkage(d: &Digraph, x: &[usize], y: &[usize]) -> Result<Linkage> {
    let cert = menger_paths_and_separator(d, x, y)?;
    Ok(Linkage {
        source_set: cert.source_set,
        sink_set: cert.sink_set,
        paths: cert.paths,
    })
}

/// A balanced pair `(X, Y)` of `A` with fewer than `|X|` disjoint `X -> Y`
/// paths, if one exists. `A` is deduplicated; guarded to
/// [`WELL_LINKED_GUARD`] vertices.
pub fn well_linked_witness(d: &Digraph, a: &[usize]) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    d.check_vertices(a)?;
    let a = vertex_set(a.iter().copied());
    if a.len() > WELL_LINKED_GUARD {
        return Err(Error::GuardExceeded(format!(
            "well-linkedness of a set of size {} (limit {WELL_LINKED_GUARD})",
            a.len()
        )));
    }
    let total = 3usize.pow(a.len() as u32);
    for code in 0..total {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        let mut c = code;
        for &v in &a {
            match c % 3 {
                1 => x.push(v),
                2 => y.push(v),
                _ => {}
            }
            c /= 3;
        }
        if x.is_empty() || x.len() != y.len() {
            continue;
        }
        if menger_paths_and_separator(d, &x, &y)?.value() < x.len() {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Whether every ordered disjoint pair `(X, Y)` of subsets of `A` with
/// `|X| = |Y| >= 1` admits an `(X, Y)`-linkage of size `|X|`.
pub fn is_well_linked(d: &Digraph, a: &[usize]) -> Result<bool> {
    Ok(well_linked_witness(d, a)?.is_none())
}
