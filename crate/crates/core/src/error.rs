use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("graph is empty after removing isolated nodes")]
    EmptyGraph,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("modularity is undefined on a graph without edges")]
    NoEdges,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {key}: {message}")]
    Config { key: String, message: String },

    #[error("infeasible attack: {0}")]
    Infeasible(String),

    #[error("stale gene {gene} for index space of size {space}")]
    StaleGene { gene: u64, space: u64 },

    #[error("planted partition generator failed after {0} attempts: graph kept isolated nodes")]
    GeneratorExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
