use thiserror::Error;

use crate::formats::FormatError;

/// Failure of a CLI run, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags, parameters or input files. Exit code 2.
    #[error("{0}")]
    Config(String),
    /// The computation itself was refused or failed. Exit code 3.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

impl From<ctbands_core::Error> for CliError {
    fn from(e: ctbands_core::Error) -> Self {
        use ctbands_core::Error as E;
        match e {
            E::BrokenPhase { .. } | E::NoConvergence { .. } | E::NotHermitian { .. } | E::OutsideRegime { .. } => {
                CliError::Compute(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Lattice(inner) => inner.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}
