use thiserror::Error;

/// Errors raised by the exact and numerical layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("expected a square matrix, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{what} = {value} is out of range (max {max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("arity mismatch: form of degree {degree} evaluated on {given} vectors")]
    ArityMismatch { degree: usize, given: usize },

    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),

    #[error("invalid parameters for `{key}`: {reason}")]
    InvalidParams { key: String, reason: String },

    #[error("cannot parse scalar `{0}`")]
    ParseScalar(String),

    #[error("stabilizer algebra is not contained in so(n): {0} basis elements fail x + x^T = 0")]
    StabilizerNotSkew(usize),

    #[error("plane is not coassociative: |phi_0 restricted| = {0:e}")]
    NotCoassociative(f64),

    #[error("normal vector is not orthogonal to the plane: residual {0:e}")]
    NotNormal(f64),

    #[error("frame is not orthonormal: Gram residual {0:e}")]
    NotOrthonormal(f64),

    #[error("degenerate self-dual triple: {0}")]
    DegenerateTriple(String),

    #[error("invalid torus metric: {0}")]
    InvalidMetric(String),

    #[error("invariance check failed: {0}")]
    InvariantViolation(String),

    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
