use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not in GL_n(Z): determinant {0}")]
    NotInGL(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} is not supported by this operation")]
    UnsupportedDimension(usize),
    #[error("constant term {0} is not a unit")]
    NonUnitConstantTerm(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not unimodular (gcd {0})")]
    NotUnimodular(String),
    #[error("vector is not fixed by the matrix")]
    NotFixed,
    #[error("1 is an eigenvalue; the affine map has no isolated fixed point")]
    OneInSpectrum,
    #[error("spectrum is not totally real and positive with simple roots ({0}); square or invert the matrix")]
    SpectrumNotTotallyRealPositive(String),
    #[error("point lies outside the region: {0}")]
    PointOutsideRegion(String),
    #[error("verification failed at {at}: clearance {clearance}")]
    VerificationFailed { at: String, clearance: f64 },
    #[error("R = {0} must exceed 1")]
    PoleAtBoundary(f64),
    #[error("quadrature grid of {0} points is too small (need at least 16)")]
    QuadratureUnderflow(usize),
    #[error("quadrature did not converge: last values {previous} and {last} at N = {n}")]
    NoConvergence { previous: f64, last: f64, n: usize },
    #[error("inconsistent input: {0}")]
    InputInconsistent(String),
    #[error("spectral radius {0} must exceed 1")]
    RhoNotGreaterThanOne(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
