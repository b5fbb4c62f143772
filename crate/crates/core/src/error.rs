use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible evaluation point: {0}")]
    IncompatiblePoint(String),

    #[error("pencil is singular or ill-conditioned at {point}: condition estimate {condition:e}")]
    SingularPencil { point: String, condition: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {term}")]
    NonFinite { term: &'static str },

    #[error("optimization diverged at step {step}: objective {value:e} exceeds {limit:e}")]
    Diverged { step: usize, value: f64, limit: f64 },

    #[error("outer iteration {outer}: {source}")]
    Outer {
        outer: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("sample {index}: {source}")]
    AtPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("conjugate pairing failed: {0}")]
    ConjugatePairing(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_point(index: usize, source: Error) -> Self {
        Error::AtPoint { index, source: Box::new(source) }
    }

    /// True for failures that originate in numerics rather than I/O or input validation.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::SingularPencil { .. }
            | Error::NonFinite { .. }
            | Error::Diverged { .. }
            | Error::Decomposition(_)
            | Error::ConjugatePairing(_) => true,
            Error::Outer { source, .. } | Error::AtPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
