use thiserror::Error;

/// Errors raised by the library. The CLI maps [`Error::is_numerical`] variants
/// to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {what} (log-magnitude {log_magnitude:.3e})")]
    Range { what: String, log_magnitude: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numerical consistency error: {0}")]
    Numerical(String),

    #[error("accuracy error: {message} (partial result {partial}, error estimate {error_estimate:.3e})")]
    Accuracy {
        message: String,
        partial: f64,
        error_estimate: f64,
    },

    #[error("ill-conditioned covariance: points {pair:?} too close (condition number {condition:.3e})")]
    Conditioning { pair: (f64, f64), condition: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("trial {index} failed: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of numerical accuracy or conditioning, as opposed to
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Range { .. }
            | Error::Degenerate(_)
            | Error::Numerical(_)
            | Error::Accuracy { .. }
            | Error::Conditioning { .. } => true,
            Error::Trial { source, .. } => source.is_numerical(),
            Error::Domain(_) | Error::Unsupported(_) => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
