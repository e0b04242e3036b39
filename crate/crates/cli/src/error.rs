use std::path::PathBuf;

use parrondo_core::Error as CoreError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_IO: u8 = 73;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(e) => match e {
                CoreError::DegenerateChain { .. }
                | CoreError::AmbiguousStationary { .. }
                | CoreError::DegenerateState(_) => EXIT_DEGENERATE,
                CoreError::UnitarityViolation { .. } | CoreError::NormDrift { .. } => EXIT_VERIFY,
                CoreError::InvalidOperand(_)
                | CoreError::ProbabilityOutOfRange { .. }
                | CoreError::InvalidEmbedding(_)
                | CoreError::InvalidWeights(_)
                | CoreError::EpsOutOfRange(_)
                | CoreError::InvalidSweep(_) => EXIT_USAGE,
            },
        }
    }
}
