use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has non-positive or non-finite weight {weight}")]
    BadWeight { u: usize, v: usize, weight: f64 },
    #[error("edge ({u}, {v}) has non-integer weight {weight}")]
    NonIntegerWeight { u: usize, v: usize, weight: f64 },
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("unsupported input: {0}")]
    Unsupported(&'static str),
    #[error("no qualifying path in graph")]
    NoPath,
    #[error(
        "enumeration budget exceeded for pair ({source_vertex}, {target}) after {count} paths"
    )]
    BudgetExceeded {
        source_vertex: usize,
        target: usize,
        count: usize,
    },
    #[error(
        "shortest paths are not unique (tie near {source_vertex} -> {target}); \
         use the integer route or perturb the weights"
    )]
    AmbiguousShortestPath { source_vertex: usize, target: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("timed out")]
    Timeout,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
