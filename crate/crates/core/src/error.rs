use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: vertex id {id} out of range for declared n = {n}")]
    VertexOutOfRange { line: usize, id: u64, n: usize },

    #[error("line {line}: self-loop on vertex {id}")]
    SelfLoop { line: usize, id: u64 },

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("graph has {n} vertices, enumeration cap is {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("independent set target {target} unreachable, found only {found}")]
    TargetUnreachable { target: usize, found: usize },

    #[error("vertex set is not a component of the residual graph: {0}")]
    NotAComponent(String),

    #[error("illegal move in round {round}: {msg}")]
    IllegalMove { round: usize, msg: String },

    #[error("spanning edges do not form a spanning tree: {0}")]
    SpanningTree(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
