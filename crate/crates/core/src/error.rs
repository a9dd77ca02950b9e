use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("region boundaries intersect at row {row}")]
    BoundaryIntersection { row: i64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("graph is not bipartite: {0}")]
    NotBipartite(String),

    #[error("bad locus: {0}")]
    BadLocus(String),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("boundary lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    #[error("unknown boundary list `{0}`")]
    UnknownBoundary(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
