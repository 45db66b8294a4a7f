use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {node} is out of bounds")]
    OutOfBounds { node: String },

    #[error("node {node} is occupied")]
    Occupied { node: String },

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("connectivity {connectivity} does not match a map of depth {depth}")]
    ConnectivityMismatch { connectivity: String, depth: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid heuristic: {0}")]
    InvalidHeuristic(String),

    #[error("heuristic table has no entry for node {0}")]
    TableMiss(String),

    #[error("node {0} has no world position")]
    MissingPosition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("direction to goal is undefined at the goal position")]
    UndefinedDirection,

    #[error("samples are not uniformly spaced (index {index})")]
    NonUniformSampling { index: usize },

    #[error("did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::InvalidScenario(err.to_string())
    }
}
