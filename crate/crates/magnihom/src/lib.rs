//! File formats, reports and the command-line front end for `magnihom-core`.

pub mod commands;
pub mod io;
pub mod report;

pub use commands::Outcome;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{what}: {message} at line {line}, column {column}")]
    Format { what: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] magnihom_core::Error),
}

/// Reads a whole file, with the path in the error.
pub fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })
}
