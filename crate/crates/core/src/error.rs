use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by evaluation, quadrature and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates the precondition of an operation. The message names
    /// the violated bound.
    #[error("{0}")]
    Domain(String),
    /// A series, continued fraction or quadrature did not converge. The best
    /// estimate reached is attached.
    #[error("{what} did not converge (best estimate {estimate:e})")]
    Convergence { what: &'static str, estimate: f64 },
    /// Unknown property identifiers, malformed grids and similar setup mistakes.
    #[error("{0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Config(_) => 3,
            Error::Convergence { .. } => 4,
        }
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive")))
    }
}
