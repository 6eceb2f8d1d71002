use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("edge {{{u}, {v}}} has nonpositive weight {weight}")]
    NonPositiveWeight { u: usize, v: usize, weight: f64 },

    #[error("partition covers {found} nodes, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("total edge weight is zero; modularity is undefined")]
    ZeroTotalWeight,

    #[error("graph has no edges")]
    NoEdges,

    #[error("node {0} is isolated")]
    IsolatedNode(usize),

    #[error("partition is not compacted: {0}")]
    NotCompacted(String),

    #[error("coarse node {node} out of range for coarse partition of {len} nodes")]
    ProlongationOutOfRange { node: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
