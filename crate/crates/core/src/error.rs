use thiserror::Error;

/// Errors produced by mesh handling, assembly, solves and experiment runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for {what} (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),

    #[error("mesh is not conforming: {0}")]
    NonConforming(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("objects live on different meshes: {0}")]
    MeshMismatch(&'static str),

    #[error("matrix is not positive definite (leading minor {minor} failed)")]
    NotPositiveDefinite { minor: usize },

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("integral diverges: {0}")]
    DivergentIntegral(String),

    #[error("nonpositive value {value} for {quantity} at level {level}")]
    NonPositive {
        quantity: String,
        level: usize,
        value: f64,
    },

    #[error("level {level}: {source}")]
    AtLevel {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_level(self, level: usize) -> Self {
        Error::AtLevel {
            level,
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad input or unusable paths rather than
    /// numerical breakdown.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::InvalidParameter(_) | Error::Parse { .. } | Error::Io(_) => true,
            Error::AtLevel { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
