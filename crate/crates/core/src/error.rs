use thiserror::Error;

/// Errors raised by the geometric and group-theoretic operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {index} out of range for a space with {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("not a metric: {0}")]
    NotAMetric(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(usize),

    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),

    #[error("family contains duplicated subspaces at positions {0} and {1}")]
    DuplicateSubspace(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the apex has no projection to the base")]
    ApexProjection,

    #[error("point does not belong to this cone: {0}")]
    ForeignConePoint(String),

    #[error("generator `{name}` is not an isometry: {reason}")]
    NotAnIsometry { name: String, reason: String },

    #[error("unknown generator `{0}` in word")]
    UnknownGenerator(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("orbit of point {0} is not closed within the enumeration cap")]
    OrbitNotClosed(usize),

    #[error("operation requires total permutations: {0}")]
    PartialAction(String),

    #[error("rotation family invalid: {0}")]
    InvalidFamily(String),

    #[error("empty subgroup generator list")]
    EmptySubgroup,

    #[error("relator `{0}` is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("simplex budget of {0} exceeded")]
    SimplexOverflow(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension {requested} out of range (available up to {available})")]
    DimensionOutOfRange { requested: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
