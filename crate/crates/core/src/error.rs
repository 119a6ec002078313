use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result is not representable in double precision.
    #[error("range error: {0}")]
    Range(String),

    /// A series or refinement loop hit its hard cap before reaching the tolerance.
    #[error("truncation error: stopped after {terms} terms with tail bound {achieved:e}")]
    Truncation { terms: usize, achieved: f64 },

    /// A sampled function returned a non-finite value at a quadrature node.
    #[error("evaluation error at node {node}: {reason}")]
    Evaluation { node: String, reason: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Usage(format!("malformed JSON: {e}"))
    }
}

pub(crate) fn finite(value: num_complex::Complex64, what: impl FnOnce() -> String) -> Result<num_complex::Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Range(what()))
    }
}
