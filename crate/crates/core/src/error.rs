use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("node {0} is not present in the graph")]
    NodeAbsent(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("hub and target sets overlap at node {0}")]
    HubOverlap(usize),

    #[error("hub predicate fails: {0}")]
    NotAHub(String),

    #[error("graph has no edges")]
    NoEdges,

    #[error("graph is not a tree")]
    NotATree,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel generation exhausted {0} retries without a usable block")]
    RetryExhausted(usize),

    #[error("enumeration guard exceeded: {count} cases > limit {limit}")]
    GuardExceeded { count: u128, limit: u128 },

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit reached")]
    IterationLimit,

    #[error("decode failed in group {group}: {source}")]
    Group {
        group: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("measurement matrix has no decode plan")]
    MissingPlan,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
