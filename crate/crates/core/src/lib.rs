pub mod augmented;
pub mod error;
pub mod graph;
pub mod harness;
pub mod order;
pub mod perm;
pub mod tdd;
pub mod treewidth;

pub use error::{Error, Result};
pub use graph::{Distance, Graph, VertexSet};
pub use perm::Permutation;
