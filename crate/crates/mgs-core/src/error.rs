use thiserror::Error;

/// Errors produced by graph construction, analysis, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge ({0}, {1}): out of range or self-loop")]
    InvalidEdge(u32, u32),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("random generation failed after {0} attempts")]
    GenerationFailed(u32),
    #[error("stability violation: frame changes inside a stability interval ({0})")]
    StabilityViolation(String),
    #[error("dynamic frame {0} is disconnected")]
    DisconnectedFrame(usize),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset covers the whole vertex set")]
    FullSubset,
    #[error("graph too large for exact enumeration: n = {n}, cap = {cap}")]
    TooLargeForExact { n: usize, cap: usize },
    #[error("state does not match the current frame: {0}")]
    FrameMismatch(String),
    #[error("invalid protocol spec: {0}")]
    InvalidSpec(String),
    #[error("trace does not cover a full phase")]
    TraceIncomplete,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidEdge(..)
                | Error::InvalidParams(..)
                | Error::TooLargeForExact { .. }
                | Error::InvalidSpec(..)
                | Error::EmptySubset
                | Error::FullSubset
        )
    }
}
