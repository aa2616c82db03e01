use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is valid but the analytic path cannot serve it.
    #[error("unsupported on the analytic path: {0}")]
    Unsupported(String),

    /// Quadrature refinement hit its iteration cap.
    #[error("quadrature did not converge: coarse = {coarse:e}, fine = {fine:e}, target relative error = {target:e}")]
    NonConvergence { coarse: f64, fine: f64, target: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
