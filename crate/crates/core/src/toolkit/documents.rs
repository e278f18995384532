use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{invalid, Error, Result};
use crate::lll::{PartitionedConflictGraph, UGraph};
use crate::pipeline::{CaseInput, LinkageFamily};

/// Version written into, and required of, every document.
pub const SCHEMA_VERSION: u32 = 1;

/// Ordered terminal pairs `(sources[i], sinks[i])` and a congestion budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminals {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub schema_version: u32,
    pub digraph: Digraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bramble: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminals: Option<Terminals>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_names: Option<Vec<String>>,
}

impl InstanceDocument {
    pub fn new(digraph: Digraph) -> Self {
        InstanceDocument {
            schema_version: SCHEMA_VERSION,
            digraph,
            bramble: None,
            terminals: None,
            vertex_names: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_version(self.schema_version)?;
        let n = self.digraph.vertex_count();
        if let Some(bags) = &self.bramble {
            for (i, bag) in bags.iter().enumerate() {
                self.digraph
                    .check_vertices(bag)
                    .map_err(|e| invalid(format!("bramble bag {i}: {e}")))?;
            }
        }
        if let Some(t) = &self.terminals {
            self.digraph
                .check_vertices(t.sources.iter().chain(&t.sinks))
                .map_err(|e| invalid(format!("terminals: {e}")))?;
            if t.sources.len() != t.sinks.len() {
                return Err(invalid(format!(
                    "terminals: {} sources but {} sinks",
                    t.sources.len(),
                    t.sinks.len()
                )));
            }
        }
        if let Some(names) = &self.vertex_names {
            if names.len() != n {
                return Err(invalid(format!(
                    "vertex_names has {} entries for {n} vertices",
                    names.len()
                )));
            }
        }
        Ok(())
    }

    pub fn bags(&self) -> Result<&[Vec<usize>]> {
        self.bramble
            .as_deref()
            .ok_or_else(|| invalid("document has no bramble"))
    }

    pub fn terminals(&self) -> Result<&Terminals> {
        self.terminals
            .as_ref()
            .ok_or_else(|| invalid("document has no terminals"))
    }

    pub fn name(&self, v: usize) -> String {
        self.vertex_names
            .as_ref()
            .and_then(|n| n.get(v).cloned())
            .unwrap_or_else(|| v.to_string())
    }
}

/// Undirected graph input (degeneracy).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: u32,
    pub graph: UGraph,
}

/// Path families input (intersection and conflict graphs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamiliesDocument {
    pub schema_version: u32,
    pub families: Vec<LinkageFamily>,
}

/// Partitioned conflict graph input (independent transversals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConflictDocument {
    pub schema_version: u32,
    pub conflict: PartitionedConflictGraph,
}

/// Three-case classifier input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDocument {
    pub schema_version: u32,
    pub case: CaseInput,
}

/// Documents carrying a schema version.
pub trait Versioned {
    fn schema_version(&self) -> u32;

    /// Semantic checks beyond parsing.
    fn check(&self) -> Result<()> {
        check_version(self.schema_version())
    }
}

impl Versioned for InstanceDocument {
    fn schema_version(&self) -> u32 {
        self.schema_version
    }

    fn check(&self) -> Result<()> {
        self.validate()
    }
}

macro_rules! versioned {
    ($($t:ty),*) => {$(
        impl Versioned for $t {
            fn schema_version(&self) -> u32 {
                self.schema_version
            }
        }
    )*};
}

versioned!(
    GraphDocument,
    FamiliesDocument,
    ConflictDocument,
    CaseDocument
);

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(invalid(format!(
            "unsupported schema_version {v}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

/// Parses a document; parse errors carry the line, column and field that
/// serde_json reports.
pub fn parse_document<T: DeserializeOwned + Versioned>(text: &str) -> Result<T> {
    let doc: T = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("malformed document: {e}")))?;
    doc.check()?;
    Ok(doc)
}

/// Canonical text form: pretty JSON in declaration field order, with a
/// trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}
