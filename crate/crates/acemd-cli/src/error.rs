//! CLI error classification and exit codes.
//!
//! Every failure class gets its own exit code so scripts can tell a typo
//! from a bad file from a degenerate decomposition: 2 usage, 3 data
//! validation, 4 decomposition, 5 analysis/spectral, 6 I/O. Argument-parse
//! failures exit 2 via clap before any of this runs.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("decomposition failed: {0}")]
    Decomposition(acemd::Error),
    #[error("analysis failed: {0}")]
    Analysis(acemd::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Decomposition(_) => 4,
            CliError::Analysis(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Classifies a library error raised while building a decomposition:
/// configuration mistakes are usage errors, everything else is a
/// decomposition failure.
pub fn decompose_err(e: acemd::Error) -> CliError {
    match e {
        acemd::Error::InvalidConfig { .. } => CliError::Usage(e.to_string()),
        _ => CliError::Decomposition(e),
    }
}

/// Classifies a library error raised downstream of a decomposition.
pub fn analysis_err(e: acemd::Error) -> CliError {
    match e {
        acemd::Error::InvalidConfig { .. } => CliError::Usage(e.to_string()),
        _ => CliError::Analysis(e),
    }
}

/// Maps a csv crate error, unwrapping the I/O cause when that's what it is.
pub fn csv_err(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Io(io),
        other => CliError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}
