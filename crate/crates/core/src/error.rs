use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::simplex::Simplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex {0} is not a member of the complex")]
    NotInComplex(Simplex),

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("complex is not face-closed: {simplex} is present but its facet {facet} is not")]
    NotFaceClosed { simplex: Simplex, facet: Simplex },

    #[error("{0} is not a prime modulus")]
    NotPrime(u32),

    #[error("{0}")]
    Domain(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: byte offset {offset}: {message}")]
    Binary {
        path: PathBuf,
        offset: u64,
        message: String,
    },

    #[error("duplicate token {token:?} in {path}")]
    DuplicateToken { path: PathBuf, token: String },

    #[error("words missing from the embedding: {}", .0.join(", "))]
    MissingWords(Vec<String>),

    #[error("word {0:?} has a zero vector and cannot be normalized")]
    ZeroVector(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad user input (files, word lists, flags)
    /// as opposed to failures inside the computation.
    pub fn is_input_error(&self) -> bool {
        if let Error::Stage { source, .. } = self {
            return source.is_input_error();
        }
        matches!(
            self,
            Error::Parse { .. }
                | Error::Binary { .. }
                | Error::DuplicateToken { .. }
                | Error::MissingWords(_)
                | Error::ZeroVector(_)
                | Error::Config(_)
                | Error::NotPrime(_)
                | Error::Io { .. }
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}
