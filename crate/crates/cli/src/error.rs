use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("expected a {expected} state, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] geodiv_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit code: 3 for non-convergence, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                geodiv_core::Error::QuadratureNotConverged { .. }
                | geodiv_core::Error::IpfNotConverged(_)
                | geodiv_core::Error::GibbsNotConverged(_),
            ) => 3,
            _ => 2,
        }
    }
}
