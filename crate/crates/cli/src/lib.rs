//! Front end for `ffdioph-core`: subcommands and the Monte Carlo extremality runner.

pub mod commands;
pub mod config;
pub mod extremal;

pub use config::{ExperimentConfig, Format, MapChoice};
pub use extremal::{quantiles, recompute_quantiles, run_extremal, ExperimentReport, SampleRow, SampleStatus, TauQuantiles};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ffdioph_core::error::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 for usage errors and malformed input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use ffdioph_core::error::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                E::Syntax { .. } | E::CoefficientOutOfRange { .. } | E::InvalidField(_) | E::InvalidWeights(_) | E::InvalidInput(_),
            ) => 2,
            _ => 1,
        }
    }
}
