use std::io;

use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    /// An enumeration hit its result cap. Results are never truncated silently.
    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    Overflow { cap: usize },

    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    /// The input set does not hit every constrained cycle.
    #[error("not a valid cover: cycle {cycle:?} is uncovered")]
    InvalidCover { cycle: Vec<VertexId> },

    #[error("instance too large for exhaustive search ({n} vertices, limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
