use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("unknown node id `{0}`")]
    UnknownNode(String),

    #[error("node index {index} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },

    #[error("found {found} communities with more than {min_size} members, need {needed}")]
    NotEnoughCommunities {
        found: usize,
        needed: usize,
        min_size: usize,
    },

    #[error("signal length {found} does not match node count {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is identically zero")]
    ZeroSignal(&'static str),

    #[error("non-personalized posterior is zero at node {node} (is the graph disconnected?)")]
    ZeroUniformPosterior { node: usize },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("{0} group is empty")]
    EmptyGroup(&'static str),

    #[error("evaluation set must contain both positive and negative labels")]
    SingleClass,

    #[error("filter is not positive definite on [-1, 1] (min response {min_response:e})")]
    NotPositiveDefinite { min_response: f64 },

    #[error("{group} group has zero score mass")]
    ZeroGroupMass { group: &'static str },

    #[error("evaluation budget of {evaluations} exhausted (best loss {best_loss})")]
    BudgetExhausted {
        evaluations: usize,
        best_point: Vec<f64>,
        best_loss: f64,
    },

    #[error("unsupported statistical test configuration: {0}")]
    UnsupportedTest(String),
}
