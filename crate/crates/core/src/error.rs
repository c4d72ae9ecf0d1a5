use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("vertex {0} listed twice")]
    DuplicateVertex(usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("edge {{{0}, {1}}} listed twice")]
    DuplicateEdge(usize, usize),

    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid tree structure: {0}")]
    InvalidStructure(String),

    #[error("graph is not connected; decompose it into connected components first")]
    Disconnected,

    #[error("no family in the registry contains {0}")]
    NotInRegistry(String),

    #[error("graph is not in the family: {0}")]
    NotInFamily(String),

    #[error("target rank {k} out of range 1..={n}")]
    TargetOutOfRange { k: usize, n: usize },

    #[error("unknown family spec `{0}`")]
    UnknownFamily(String),
}
