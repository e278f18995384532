//! Certificates for large directed treewidth: brambles, well-linked sets,
//! linkages and path systems.

mod bramble;
mod linkage;
mod path_system;

pub use bramble::{
    bramble_order_exact, congestion, normalize_bags, occurrence_counts, verify_bramble, Bramble,
    BrambleReport, BrambleViolation, OrderOutcome, ORDER_GUARD_BAGS,
};
pub use linkage::{is_well_linked, max_linkage, well_linked_witness, Linkage, WELL_LINKED_GUARD};
pub use path_system::{
    build_path_system, maximal_path, verify_path_system, IndexedLinkage, PathSystem,
    PathSystemReport,
};
