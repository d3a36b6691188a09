use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty graph document")]
    EmptyInput,
    #[error("line {line}: malformed record: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: loop at vertex `{vertex}` is not allowed")]
    Loop { line: usize, vertex: String },
    #[error("line {line}: multiplicity must be positive, got {value}")]
    NonPositiveMultiplicity { line: usize, value: i64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least 2 vertices")]
    TooFewVertices,
    #[error("graph has {0} vertices, at most 64 are supported")]
    TooManyVertices(usize),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex sets are not disjoint")]
    OverlappingSets,
    #[error("divisor is negative at non-sink vertex `{0}`")]
    NegativeOffSink(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("block set is not critical for the orientation")]
    NotCritical,
    #[error("invalid extension spec: {0}")]
    InvalidSpec(String),
    #[error("underlying simple graph is not a tree")]
    NotATree,
    #[error("divisor is not a boundary divisor for the partition")]
    NotBoundaryDivisor,
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("construction check failed: {0}")]
    ConstructionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
