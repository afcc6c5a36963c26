//! Error type shared by every layer of the crate.
//!
//! All fallible operations return [`Result`]. Variants carry the numbers a
//! caller needs to decide whether the failure is a usage bug (shapes, weight
//! structure), a property of the input (definiteness, degeneracy,
//! singularity), or a numerical breakdown (isotropic pair, stalled sweep).

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the dense kernels and the symplectic layers above them.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes are incompatible for the requested operation.
    DimensionMismatch { expected: String, got: String },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Symplectic objects live in even dimension; this one does not.
    OddDimension { rows: usize, cols: usize },
    /// `‖A − Aᵀ‖_F` exceeded the admission threshold for a symmetric input.
    NotSymmetric { deviation: f64, threshold: f64 },
    /// An eigenvalue of a matrix that must be positive definite is not positive.
    NotPositiveDefinite { eigenvalue: f64 },
    /// Elimination met a pivot below threshold; the system is singular to
    /// working precision. The estimate is `max|A| / |pivot|`.
    Singular { condition_estimate: f64 },
    /// The eigensolver did not reach its off-diagonal target within the sweep budget.
    NoConvergence { sweeps: usize },
    /// A frame violates `XᵀJX = J` beyond the stated tolerance.
    NotFeasible { residual: f64, tolerance: f64 },
    /// A column pair has vanishing symplectic pairing `x_jᵀ J x_{k+j}` and
    /// cannot be normalized.
    IsotropicPair { pair: usize, pairing: f64 },
    /// Eigenvalues of −(M^{1/2} J M^{1/2})² failed to split into matched pairs.
    DegeneratePairing { residual: f64, tolerance: f64 },
    /// Weight sequences must be finite, positive, and strictly increasing.
    InvalidWeights { detail: String },
    /// An operation that requires a critical point received a frame whose
    /// stationarity residual is too large.
    NotCritical { residual: f64, tolerance: f64 },
    /// The Hessian value along the certificate direction disagrees with its
    /// closed form beyond tolerance; the point is not numerically critical
    /// enough for the certificate to be trusted.
    CertificateMismatch { computed: f64, closed_form: f64 },
    /// Enumeration was asked for more ordered selections than the cap allows.
    SelectionOverflow { requested: u128, limit: u128 },
    /// A scalar or index argument is outside its documented range.
    InvalidArgument { what: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::OddDimension { rows, cols } => {
                write!(f, "dimension must be even, got {rows}x{cols}")
            }
            Error::NotSymmetric { deviation, threshold } => write!(
                f,
                "matrix is not symmetric: asymmetry {deviation:.3e} exceeds threshold {threshold:.3e}"
            ),
            Error::NotPositiveDefinite { eigenvalue } => write!(
                f,
                "matrix is not positive definite: smallest eigenvalue {eigenvalue:.3e}"
            ),
            Error::Singular { condition_estimate } => write!(
                f,
                "matrix is singular to working precision (condition estimate {condition_estimate:.3e})"
            ),
            Error::NoConvergence { sweeps } => {
                write!(f, "eigensolver failed to converge within {sweeps} sweeps")
            }
            Error::NotFeasible { residual, tolerance } => write!(
                f,
                "frame is not symplectic: residual {residual:.3e} exceeds tolerance {tolerance:.3e}"
            ),
            Error::IsotropicPair { pair, pairing } => write!(
                f,
                "column pair {pair} is numerically isotropic (pairing {pairing:.3e}); cannot normalize"
            ),
            Error::DegeneratePairing { residual, tolerance } => write!(
                f,
                "eigenvalues do not pair up: pairing residual {residual:.3e} exceeds {tolerance:.3e}; \
                 review tolerances or condition of the input"
            ),
            Error::InvalidWeights { detail } => write!(f, "invalid weight sequence: {detail}"),
            Error::NotCritical { residual, tolerance } => write!(
                f,
                "frame is not a critical point: stationarity residual {residual:.3e} exceeds {tolerance:.3e}"
            ),
            Error::CertificateMismatch { computed, closed_form } => write!(
                f,
                "saddle certificate cross-check failed: Hessian form {computed:.6e} vs closed form {closed_form:.6e}"
            ),
            Error::SelectionOverflow { requested, limit } => write!(
                f,
                "enumeration would visit {requested} ordered selections, more than the cap {limit}"
            ),
            Error::InvalidArgument { what } => write!(f, "invalid argument: {what}"),
        }
    }
}

impl std::error::Error for Error {}
