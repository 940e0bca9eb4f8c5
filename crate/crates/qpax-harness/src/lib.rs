//! Convergence studies, field maps and self checks for `qpax-core`.

pub mod config;
pub mod experiment;
pub mod selftest;
pub mod source;

pub use config::{ExperimentConfig, ExperimentKind, Settings};
pub use experiment::{fit_slope, run_experiment, run_field_map, ConvergenceRecord};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),
    #[error("slope fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Core(#[from] qpax_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Core(qpax_core::Error::Config(_)) => 2,
            _ => 3,
        }
    }
}
