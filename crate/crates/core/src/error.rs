use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight exponent a = {0} is not integrable (need a > -1)")]
    NonIntegrableWeight(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite integrand value at {0:?}")]
    NonFinite(Vec<f64>),

    #[error("pole in coefficient: 2i + a - 1 = 0 for i = {0}")]
    Pole(u32),

    #[error("wrong parity: {0}")]
    WrongParity(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("point {0:?} is outside the domain: {1}")]
    Domain(Vec<f64>, String),

    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("degenerate sphere: H = {h:e} at r = {r}")]
    DegenerateSphere { r: f64, h: f64 },

    #[error("point {0:?} is not a nodal point (|u| = {1:e})")]
    NotNodal(Vec<f64>, f64),

    #[error("singular linear system")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
