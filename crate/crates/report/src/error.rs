use std::path::PathBuf;

use gr1_core::frontend::{CompileError, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] ParseError),
    /// One message per violated rule, each with its source line.
    #[error("specification is not in GR(1) form:\n{}", .0.join("\n"))]
    Shape(Vec<String>),
    #[error("{0}")]
    Compile(#[from] CompileError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl ReportError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ReportError::Io { path: path.into(), source }
    }
}
