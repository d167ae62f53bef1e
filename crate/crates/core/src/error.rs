use thiserror::Error;

/// Errors raised by graph construction, serialization and the game environments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node count must be in 1..={max}, got {got}")]
    InvalidNodeCount { got: usize, max: usize },

    #[error("edge index {index} out of range (graph has {slots} edge slots)")]
    EdgeIndexOutOfRange { index: usize, slots: usize },

    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop on node {node} is not allowed")]
    SelfLoopNotAllowed { node: usize },

    #[error("malformed graph6 text: {0}")]
    Graph6(String),

    #[error("graph has {got} nodes, expected {expected}")]
    NodeCountMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("action {action} out of range (action space has {size} actions)")]
    ActionOutOfRange { action: usize, size: usize },

    #[error("episode finished")]
    EpisodeFinished,

    #[error("{0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
