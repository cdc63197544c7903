use thiserror::Error;

/// Errors produced by the state, work and threshold routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arity: {0}")]
    InvalidArity(String),

    #[error("mixture weights sum to {0}, expected 1")]
    Normalization(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("site {site} out of range for a {n}-qubit system")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested measurement branch has (numerically) zero probability.
    #[error("zero-probability branch (p = {0:e})")]
    ZeroProbability(f64),

    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("quadrature not converged: coarse {coarse}, fine {fine}, tolerance {tol:e}")]
    Accuracy { coarse: f64, fine: f64, tol: f64 },

    #[error("no threshold in [0, 1]: {0}")]
    NoThreshold(String),

    #[error("margin is not monotone in p, bisection unsound: {0}")]
    NonMonotone(String),

    #[error("numerical integrity: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
