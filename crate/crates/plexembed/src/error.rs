use std::path::PathBuf;

/// Unified error type for graph construction, walking, training, evaluation,
/// and file handling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("layer index {layer} out of range (network has {num_layers} layers)")]
    InvalidLayer { layer: usize, num_layers: usize },

    #[error("node index {node} out of range (network has {num_nodes} nodes)")]
    InvalidNode { node: usize, num_nodes: usize },

    #[error("unknown node name {0:?}")]
    UnknownNode(String),

    #[error("walk corpus is empty, nothing to train on")]
    EmptyCorpus,

    #[error("embedding spaces disagree on node count ({0} vs {1})")]
    NodeSetMismatch(usize, usize),

    #[error("edge split leaves no {0} edges")]
    DegenerateSplit(&'static str),

    #[error("cannot predict {requested} links from {available} candidate pairs")]
    InsufficientCandidates { requested: usize, available: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, msg: msg.into() }
    }
}
