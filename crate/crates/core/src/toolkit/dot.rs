use std::fmt::Write;

use super::documents::InstanceDocument;
use crate::obstruction::occurrence_counts;

const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: arcs between the vertices, one coloured cluster per
/// bag holding copies of its vertices. A copy of a vertex lying in several
/// bags is drawn dashed and labelled with its occurrence count.
pub fn export_dot(doc: &InstanceDocument) -> String {
    let mut out = String::new();
    let d = &doc.digraph;
    out.push_str("digraph instance {\n  compound=true;\n  node [shape=circle];\n");
    let (sources, sinks) = doc
        .terminals
        .as_ref()
        .map(|t| (t.sources.clone(), t.sinks.clone()))
        .unwrap_or_default();
    for v in d.vertices() {
        let mut attrs = format!("label={}", quote(&doc.name(v)));
        if let Some(i) = sources.iter().position(|&s| s == v) {
            let _ = write!(attrs, ", shape=box, xlabel={}", quote(&format!("s{i}")));
        }
        if let Some(i) = sinks.iter().position(|&s| s == v) {
            let _ = write!(attrs, ", shape=box, xlabel={}", quote(&format!("t{i}")));
        }
        let _ = writeln!(out, "  v{v} [{attrs}];");
    }
    for (u, v) in d.edges() {
        let _ = writeln!(out, "  v{u} -> v{v};");
    }
    if let Some(bags) = &doc.bramble {
        let oc = occurrence_counts(bags);
        for (i, bag) in bags.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let _ = writeln!(out, "  subgraph cluster_bag{i} {{");
            let _ = writeln!(
                out,
                "    label={}; color={}; style=rounded;",
                quote(&format!("B{i}")),
                quote(colour)
            );
            for &v in bag {
                let count = oc.get(&v).copied().unwrap_or(1);
                let (label, style) = if count > 1 {
                    (format!("{} ×{count}", doc.name(v)), "dashed")
                } else {
                    (doc.name(v), "solid")
                };
                let _ = writeln!(
                    out,
                    "    b{i}_{v} [label={}, style={style}, color={}];",
                    quote(&label),
                    quote(colour)
                );
            }
            out.push_str("  }\n");
            for &v in bag {
                let _ = writeln!(out, "  b{i}_{v} -> v{v} [style=dotted, arrowhead=none];");
            }
        }
    }
    out.push_str("}\n");
    out
}
