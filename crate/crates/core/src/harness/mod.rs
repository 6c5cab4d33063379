//! Oracle, instance generators, file formats and the small-graph enumerator
//! used by the tests and the command-line tool.

pub mod enumerate;
pub mod format;
pub mod generate;
pub mod oracle;

pub use enumerate::connected_graphs;
pub use format::{parse_decomposition, parse_graph, write_decomposition, write_graph};
pub use generate::{generate_partial_ktree, random_relabel, InstanceBundle};
pub use oracle::brute_force_iso;
