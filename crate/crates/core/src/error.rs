use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges")]
    EmptyInput,

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("graph has no edges")]
    NoEdges,

    #[error("node {0} out of range")]
    NodeOutOfRange(usize),

    #[error("partition covers {got} nodes but graph has {expected}")]
    PartitionSize { expected: usize, got: usize },

    #[error("node `{0}` has no community in the partition")]
    MissingNode(String),

    #[error("partition names node `{0}` which is not in the graph")]
    UnknownNode(String),

    #[error("community id {id} out of range for {count} communities")]
    CommunityOutOfRange { id: usize, count: usize },

    #[error("community {0} missing from community statistics")]
    MissingCommunity(usize),

    #[error("eigenvector power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("epidemic threshold undefined: <k^2> = {second} <= <k> = {first}")]
    ThresholdUndefined { first: f64, second: f64 },

    #[error("reference outbreak empty")]
    EmptyReference,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("infeasible generator configuration: {0}")]
    Infeasible(String),

    #[error("unknown {what} `{value}`")]
    UnknownName { what: &'static str, value: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
