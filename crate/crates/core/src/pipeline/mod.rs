//! Parameter chain, conflict graphs over linkage families and the
//! three-case classifier of the congestion-8 argument. The external lemmas
//! (membership in `Z`, the families themselves) are inputs.

mod cases;
mod conflict;
mod params;

pub use cases::{
    classify_case, is_matching, maximum_matching, verify_case_report, CaseInput, CaseReport,
};
pub use conflict::{build_conflict_graphs, joint_degeneracy, ConflictGraphs, LinkageFamily};
pub use params::{
    compute_parameters, compute_parameters_at, epsilon_boundary, verify_parameters, ChainChecks,
    ParameterInputs, PipelineParameters, EPSILON_BOUNDARY_TOLERANCE, LINKAGE_FACTOR,
};
