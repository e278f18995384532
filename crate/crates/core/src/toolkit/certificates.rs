use serde::{Deserialize, Serialize};

use super::documents::{Versioned, SCHEMA_VERSION};
use crate::congestion::{build_reduced_instance, ReducedInstance};
use crate::ddp::{verify_solution, BlockedSide, DdpInstance, DdpSolution};
use crate::digraph::{Digraph, SeparatorCertificate};
use crate::lll::{degeneracy, order_width, verify_rainbow, PartitionedConflictGraph, UGraph};
use crate::obstruction::{
    bramble_order_exact, congestion, verify_bramble, verify_path_system, OrderOutcome, PathSystem,
    ORDER_GUARD_BAGS,
};
use crate::pipeline::{
    verify_case_report, verify_parameters, CaseInput, CaseReport, PipelineParameters,
};

/// Certificate payloads. Each carries everything its verifier needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "camelCase")]
pub enum Certificate {
    Bramble {
        digraph: Digraph,
        bags: Vec<Vec<usize>>,
        congestion: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<OrderOutcome>,
    },
    PathSystem {
        digraph: Digraph,
        system: PathSystem,
    },
    DdpSolution {
        instance: DdpInstance,
        solution: DdpSolution,
    },
    /// Menger certificate; with `k` set, the separator must be smaller than
    /// `k` (dichotomy evidence on the given side).
    Separator {
        digraph: Digraph,
        certificate: SeparatorCertificate,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        side: Option<BlockedSide>,
    },
    RainbowSelection {
        conflict: PartitionedConflictGraph,
        selection: Vec<usize>,
    },
    Parameters(PipelineParameters),
    ReducedInstance {
        digraph: Digraph,
        reduced: ReducedInstance,
    },
    Degeneracy {
        graph: UGraph,
        degeneracy: usize,
        order: Vec<usize>,
    },
    CaseReport {
        input: CaseInput,
        report: CaseReport,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Bramble { .. } => "bramble",
            Certificate::PathSystem { .. } => "pathSystem",
            Certificate::DdpSolution { .. } => "ddpSolution",
            Certificate::Separator { .. } => "separator",
            Certificate::RainbowSelection { .. } => "rainbowSelection",
            Certificate::Parameters(_) => "parameters",
            Certificate::ReducedInstance { .. } => "reducedInstance",
            Certificate::Degeneracy { .. } => "degeneracy",
            Certificate::CaseReport { .. } => "caseReport",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl Provenance {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Provenance {
            command: command.into(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub certificate: Certificate,
    pub provenance: Provenance,
    pub verified: bool,
}

impl Versioned for CertificateDocument {
    fn schema_version(&self) -> u32 {
        self.schema_version
    }
}

impl CertificateDocument {
    /// Runs the verifier; `verified` records its verdict.
    pub fn new(certificate: Certificate, provenance: Provenance) -> Self {
        let verified = reverify(&certificate).is_ok();
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            certificate,
            provenance,
            verified,
        }
    }
}

/// Standalone verifier for every certificate kind.
pub fn reverify(cert: &Certificate) -> Result<(), String> {
    match cert {
        Certificate::Bramble {
            digraph,
            bags,
            congestion: c,
            order,
        } => {
            let report = verify_bramble(digraph, bags).map_err(|e| e.to_string())?;
            if let Some(v) = report.violation {
                return Err(v.to_string());
            }
            if congestion(bags) != *c {
                return Err(format!(
                    "recorded congestion {c}, actual {}",
                    congestion(bags)
                ));
            }
            match order {
                None => Ok(()),
                Some(OrderOutcome::Exact { order, hitting_set }) => {
                    if hitting_set.len() != *order {
                        return Err("hitting set size differs from the order".into());
                    }
                    if let Some(i) = bags
                        .iter()
                        .position(|b| !b.iter().any(|v| hitting_set.contains(v)))
                    {
                        return Err(format!("hitting set misses bag {i}"));
                    }
                    if bags.len() <= ORDER_GUARD_BAGS && *order > 0 {
                        match bramble_order_exact(digraph, bags, *order - 1)
                            .map_err(|e| e.to_string())?
                        {
                            OrderOutcome::ExceedsCap { .. } => Ok(()),
                            OrderOutcome::Exact { order: o, .. } => {
                                Err(format!("a hitting set of size {o} exists"))
                            }
                        }
                    } else {
                        Ok(())
                    }
                }
                Some(OrderOutcome::ExceedsCap { cap }) => {
                    match bramble_order_exact(digraph, bags, *cap).map_err(|e| e.to_string())? {
                        OrderOutcome::ExceedsCap { .. } => Ok(()),
                        OrderOutcome::Exact { order, .. } => {
                            Err(format!("order {order} is within the cap"))
                        }
                    }
                }
            }
        }
        Certificate::PathSystem { digraph, system } => {
            let report = verify_path_system(digraph, system);
            if report.is_valid() {
                Ok(())
            } else {
                Err(report.violations.join("; "))
            }
        }
        Certificate::DdpSolution { instance, solution } => {
            instance.validate().map_err(|e| e.to_string())?;
            let report = verify_solution(instance, &solution.paths);
            if !report.is_valid() {
                return Err(report.violations.join("; "));
            }
            if DdpSolution::from_paths(solution.paths.clone()) != *solution {
                return Err("recorded loads differ from the paths".into());
            }
            Ok(())
        }
        Certificate::Separator {
            digraph,
            certificate,
            k,
            ..
        } => {
            certificate.verify(digraph)?;
            match k {
                Some(k) if certificate.separator.len() >= *k => Err(format!(
                    "separator of size {} is not below k = {k}",
                    certificate.separator.len()
                )),
                _ => Ok(()),
            }
        }
        Certificate::RainbowSelection {
            conflict,
            selection,
        } => verify_rainbow(conflict, selection),
        Certificate::Parameters(p) => verify_parameters(p),
        Certificate::ReducedInstance { digraph, reduced } => {
            let fresh =
                build_reduced_instance(digraph, &reduced.bags, &reduced.sources, &reduced.sinks)
                    .map_err(|e| e.to_string())?;
            if &fresh != reduced {
                return Err("recorded reduction differs from a fresh construction".into());
            }
            reduced.check_invariants()
        }
        Certificate::Degeneracy {
            graph,
            degeneracy: d,
            order,
        } => {
            let mut seen = vec![false; graph.vertex_count()];
            if order.len() != seen.len()
                || order
                    .iter()
                    .any(|&v| v >= seen.len() || std::mem::replace(&mut seen[v], true))
            {
                return Err("order is not a permutation of the vertices".into());
            }
            if order_width(graph, order) != *d {
                return Err(format!(
                    "order replays to width {}, recorded {d}",
                    order_width(graph, order)
                ));
            }
            let (actual, _) = degeneracy(graph);
            if actual != *d {
                return Err(format!("degeneracy is {actual}, recorded {d}"));
            }
            Ok(())
        }
        Certificate::CaseReport { input, report } => verify_case_report(input, report),
    }
}
