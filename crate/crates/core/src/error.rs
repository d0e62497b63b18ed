use thiserror::Error;

use crate::decomposition::Violation;
use crate::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("missing header line before data")]
    MissingHeader,
    #[error("duplicate header line")]
    DuplicateHeader,
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("weight {0} is not a nonnegative integer")]
    BadWeight(String),
    #[error("node id {id} out of range ({count} nodes)")]
    NodeOutOfRange { id: u64, count: usize },
    #[error("bag for node {0} given twice")]
    DuplicateBag(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("invalid tree decomposition: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidDecomposition(Vec<Violation>),

    #[error("malformed nice tree decomposition at node {node}: {reason}")]
    MalformedNice { node: usize, reason: String },

    #[error("graph has {0} vertices; at least 3 are needed for a Hamiltonian cycle")]
    TooFewVertices(usize),

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("{what} supports at most {limit} vertices, got {n}")]
    OracleGuard { what: &'static str, n: usize, limit: usize },

    #[error("universe of {size} elements exceeds the cap of {cap}")]
    UniverseTooLarge { size: usize, cap: usize },

    #[error("subset functions are defined over different universes")]
    UniverseMismatch,

    #[error("polynomial degree bounds differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),

    #[error("shift by {shift} pushes nonzero coefficients past degree {bound}")]
    ShiftOverflow { shift: u64, bound: usize },

    /// An internal invariant failed (odd root value, negative count, bad state).
    #[error("internal invariant violated: {0}")]
    Defect(String),
}

impl Error {
    pub(crate) fn parse(line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, kind }
    }

    /// True for errors that signal a bug rather than bad input.
    pub fn is_defect(&self) -> bool {
        matches!(self, Error::Defect(_))
    }
}
