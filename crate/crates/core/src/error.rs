use thiserror::Error;

use crate::hypergraph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Vertex),

    #[error("edge {0} is not present")]
    UnknownEdge(String),

    #[error("edge {0} is not a proper subset of another edge")]
    NotProperSubedge(String),

    #[error("vertex `{0}` has degree 0, nothing to merge")]
    NothingToMerge(Vertex),

    #[error("edge contains `{0}` which is not in the vertex set")]
    DanglingVertex(Vertex),

    #[error("step {index} is invalid: {source}")]
    InvalidStep { index: usize, source: Box<Error> },

    #[error("sequence expects a source with {expected_vertices} vertices and {expected_edges} edges, got {vertices} and {edges}")]
    FingerprintMismatch {
        expected_vertices: usize,
        expected_edges: usize,
        vertices: usize,
        edges: usize,
    },

    #[error("path endpoints must be distinct (got `{0}` twice)")]
    SameEndpoints(Vertex),

    #[error("{what}: search budget of {budget} exhausted")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("{what}: size {actual} exceeds the configured limit {limit}")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("hypergraph is not reduced")]
    NotReduced,

    #[error("hypergraph has degree {degree}, at most {allowed} is required")]
    DegreeTooLarge { degree: usize, allowed: usize },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid minor map: {0}")]
    InvalidMinorMap(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypergraphs are not isomorphic")]
    NotIsomorphic,

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{relation}` used with arity {found}, expected {expected}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },

    #[error("constant `{0}` collides with the reserved fresh-constant namespace")]
    ReservedConstant(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn at_step(index: usize, source: Error) -> Self {
        Error::InvalidStep {
            index,
            source: Box::new(source),
        }
    }

    /// True for errors that signal an exhausted search budget or size limit
    /// rather than a malformed input or a negative answer.
    pub fn is_resource_limit(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } | Error::LimitExceeded { .. } => true,
            Error::InvalidStep { source, .. } => source.is_resource_limit(),
            _ => false,
        }
    }
}
