use thiserror::Error;

/// Errors raised by the numerical routines, the model and the CLI layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The product ε_B·ε_th sits on the boundary between the two closed-form
    /// branches, where the eavesdropper breakpoint diverges.
    #[error("branch singularity: eps_B * eps_th = {product} is within 1e-9 of 1")]
    BranchSingularity { product: f64 },

    /// Adaptive quadrature ran out of subdivisions. `estimate` is the best
    /// value found so far.
    #[error("integration did not converge: estimate {estimate:e}, error {error:e}")]
    NoConvergence { estimate: f64, error: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
