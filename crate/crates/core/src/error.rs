use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("reachability target {0} is forbidden")]
    InvalidQuery(usize),
    #[error("bipartition sides overlap in vertex {0}")]
    InvalidBipartition(usize),
    #[error("the root bag has no parent")]
    RootHasNoParent,
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("width exceeds the bound {0}")]
    WidthExceeded(usize),
    #[error("no admissible pair of bag orderings")]
    NoAdmissibleMapping,
    #[error("graphs have different vertex counts ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
