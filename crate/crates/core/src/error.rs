use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell ({row},{col}) is outside the {rows}x{cols} board")]
    InvalidCoordinate { row: usize, col: usize, rows: usize, cols: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no eligible cell left for a mine")]
    BoardFull,
    #[error("the game is already over")]
    GameOver,
    #[error("cell {0} is covered")]
    NotUncovered(crate::board::Cell),
    #[error("cell {0} is not covered")]
    NotCovered(crate::board::Cell),
    #[error("inconsistent board state: {0}")]
    InconsistentState(String),
    #[error("component with {0} variables exceeds the enumeration cap")]
    TooLarge(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported kernel {0}x{1}: same padding needs odd kernel sizes")]
    UnsupportedKernel(usize, usize),
    #[error("forward cache does not belong to the current parameters")]
    Cache,
    #[error("model format error: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
