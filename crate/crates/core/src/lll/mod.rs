//! Intersection graphs, degeneracy, the polynomial LLL condition and
//! independent transversals of partitioned conflict graphs.

mod condition;
mod graph;
mod rainbow;

pub use condition::{
    check_poly_lll_condition, classical_lll_bound, dependency_bound, min_passing_t, LllCheck,
};
pub use graph::{
    build_intersection_graph, degeneracy, order_width, IntersectionGraph, MemberRef, UGraph,
};
pub use rainbow::{
    degree_prune, rainbow_exhaustive, rainbow_independent_set, verify_rainbow,
    PartitionedConflictGraph, PrunedConflictGraph, RainbowOutcome, EXHAUSTIVE_GUARD,
};
