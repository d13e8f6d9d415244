use thiserror::Error;

/// Errors raised by the kernel engines and the study harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at nonpositive integer {0}")]
    GammaPole(f64),

    #[error("parameter pole: {0}")]
    ParameterPole(String),

    #[error("series did not converge within {max_terms} terms")]
    NonConvergence { max_terms: usize },

    #[error("matrix is not numerically positive definite at order {order} (pivot {pivot:e}); raise precision_bits")]
    IndefiniteMatrix { order: usize, pivot: f64 },

    #[error("|1 - z conj(w)| = {gap:e} is below the Christoffel-Darboux threshold; use the direct kernel sum")]
    NearDiagonal { gap: f64 },

    #[error("quadrature did not converge after {refinements} refinements (last change {change:e})")]
    QuadratureNonConvergence { refinements: usize, change: f64 },

    #[error("degree {requested} exceeds available degree {available}")]
    DegreeOutOfRange { requested: usize, available: usize },

    #[error("degree {degree} is below the closed-form threshold {threshold}")]
    BelowThreshold { degree: usize, threshold: usize },

    #[error("denominator {0:e} too close to zero")]
    NearZeroDivision(f64),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
