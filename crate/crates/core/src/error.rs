use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Scope(String),
    #[error("homogeneous symbol singular at DC: input must have zero mean")]
    SingularAtDc,
    #[error("threshold too small for truncation: global average {average} exceeds lambda {lambda}")]
    ThresholdTooSmall { average: f64, lambda: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("boundary mass {fraction:e} exceeds tolerance at t = {t}; largest admissible t = {last_valid}")]
    Window { t: f64, fraction: f64, last_valid: f64 },
    #[error("non-finite state encountered; last valid time {last_valid}")]
    Divergence { last_valid: f64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for failures caused by inputs or parameters rather than by the run itself.
    pub fn is_configuration(&self) -> bool {
        !matches!(self, Error::Window { .. } | Error::Divergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
