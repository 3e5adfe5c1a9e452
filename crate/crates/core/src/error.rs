use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("validation error at row {row}: {message}")]
    Validation { row: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid outside spectrum support: {0}")]
    OutsideSupport(String),

    #[error("empty mode set: no spectral bin reaches threshold {threshold}")]
    EmptyModeSet { threshold: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("step-size violation: dt * (|H| + gamma1) = {value:.4} (must be < 0.1)")]
    StepSize { value: f64 },

    #[error("density-operator invariant breach at t = {time}: {message}")]
    InvariantBreach { time: f64, message: String },

    #[error("undefined correlation: {0}")]
    Undefined(String),

    #[error("no shared support between curves")]
    NoSharedSupport,

    #[error("evolution failed at shift {shift}, t1 {t1}: {source}")]
    Scan {
        shift: f64,
        t1: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerical engines rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::StepSize { .. } | Error::InvariantBreach { .. } => true,
            Error::Scan { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
