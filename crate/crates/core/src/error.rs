use thiserror::Error;

/// Errors raised by the path, chain and limit computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid walk parameters K={k}, h={h}: {reason}")]
    InvalidParams { k: i64, h: i64, reason: &'static str },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("paths are not neighbours: {0}")]
    NotNeighbor(String),

    #[error("invalid mark: {0}")]
    InvalidMark(String),

    #[error("K={k} exceeds the enumeration cap {cap}")]
    EnumerationCap { k: usize, cap: usize },

    #[error("{states} shape states exceed the state cap {cap}")]
    StateCap { states: String, cap: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    #[error("invalid distribution: {0}")]
    InvalidPmf(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether the error is a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::EnumerationCap { .. } | Error::StateCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
