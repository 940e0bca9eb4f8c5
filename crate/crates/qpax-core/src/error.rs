use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("matrix is singular (zero pivot in column {column})")]
    Singular { column: usize },
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("point ({x}, {y}) lies within {limit} of the boundary (distance {distance})")]
    TooClose {
        x: f64,
        y: f64,
        distance: f64,
        limit: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, got })
    }
}
