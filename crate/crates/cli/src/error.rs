use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {message}", path.display())]
    Write { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] ncphase_core::Error),
}

impl CliError {
    /// `1` for physicality violations, `2` for bad input.
    pub fn exit_code(&self) -> i32 {
        use ncphase_core::Error as E;
        match self {
            CliError::Core(
                E::NotPositiveDefinite { .. }
                | E::QuadratureDiverged { .. }
                | E::BoundViolated { .. },
            ) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
