use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configured bound exceeded: {0}")]
    Bound(String),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
