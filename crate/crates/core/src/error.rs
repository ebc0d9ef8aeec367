use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },

    #[error("self-loop at vertex {0} but self-loops are disallowed")]
    SelfLoopDisallowed(u64),

    #[error("graph has {n} vertices, more than the supported maximum {max}")]
    TooManyVertices { n: usize, max: usize },

    #[error("graph has no edges")]
    NoEdges,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge probabilities exceed 1: W = {total} < w_max^2 = {max_sq}")]
    InvalidProbabilities { total: f64, max_sq: f64 },

    #[error("{what}: retry limit of {limit} exhausted")]
    RetriesExhausted { what: &'static str, limit: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("edge list line {line}: {msg}")]
    EdgeListParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
