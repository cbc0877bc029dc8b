//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("amplitude vector has length {got} but the register dimensions require {expected}")]
    AmplitudeLength { got: usize, expected: usize },

    #[error("invalid local dimension {dim} at party {party}: every party needs d >= 2")]
    BadLocalDimension { party: usize, dim: usize },

    #[error("state is not normalized: |sum - 1| = {deviation:.3e} exceeds {tol:.0e}")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("operator is not Hermitian: max |M - M^dag| = {deviation:.3e} exceeds {tol:.0e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("operator trace deviates from one by {deviation:.3e} (tolerance {tol:.0e})")]
    TraceNotOne { deviation: f64, tol: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("bipartition mask {mask:#b} is invalid for {n_parties} parties: one side must be a nonempty proper subset")]
    InvalidBipartition { mask: u64, n_parties: usize },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("need at least {required} parties, got {got}")]
    TooFewParties { required: usize, got: usize },

    #[error("total register dimension {dim} exceeds the dense-representation limit {limit}")]
    RegisterTooLarge { dim: usize, limit: usize },

    #[error("invalid probability vector: {reason}")]
    BadProbabilities { reason: String },

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("numerical inconsistency in {context}: disagreement {deviation:.3e} exceeds {tol:.0e}")]
    NumericalInconsistency {
        context: &'static str,
        deviation: f64,
        tol: f64,
    },

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("eigendecomposition did not converge")]
    EigFailed,

    #[error("reference basis is not orthonormal: max |B^dag B - 1| = {deviation:.3e}")]
    BasisNotOrthonormal { deviation: f64 },

    #[error("could not parse state description: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to rejected
    /// input). Callers use this to distinguish "your state is bad" from
    /// "the computation broke down".
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalInconsistency { .. } | Error::SvdFailed | Error::EigFailed
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
