//! Directed-treewidth obstructions (brambles, well-linked sets, path systems)
//! and their use for routing terminal pairs with bounded vertex congestion.

pub mod congestion;
pub mod ddp;
pub mod digraph;
pub mod error;
pub mod lll;
pub mod numeric;
pub mod obstruction;
pub mod pipeline;
pub mod toolkit;

pub use digraph::{Digraph, VertexPath};
pub use error::{Error, Result};
