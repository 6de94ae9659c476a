//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the numerical pipeline.
///
/// Variants carry a short human-readable description of the violated
/// condition; numerical defects are reported in scientific notation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Model parameters violate an invariant (e.g. `mu <= 0` or `|u| == |v|`).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// Input lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A pivot vanished while orthogonalising the columns of a matrix.
    #[error("matrix is not invertible: {0}")]
    NonInvertible(String),
    /// Input to a Hermitian routine is not Hermitian.
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    /// Input to the polar decomposition is (numerically) singular.
    #[error("matrix is singular: {0}")]
    Singular(String),
    /// An angle variable was requested at a point where it is undefined.
    #[error("angle undefined: {0}")]
    AngleUndefined(String),
    /// The global gauge section is only implemented for `u < 0`, `|u| > |v|`.
    #[error("gauge section unavailable: {0}")]
    SectionUnavailable(String),
    /// A phase needed for gauge fixing is undefined (zero modulus).
    #[error("phase undefined: {0}")]
    PhaseUndefined(String),
    /// Angle extraction attempted at a chart boundary point.
    #[error("boundary point: {0}")]
    BoundaryPoint(String),
    /// The eigen-splitting used in the group-level reconstruction failed.
    #[error("reconstruction failed: {0}")]
    ReconstructionFailure(String),
    /// Singular values of the off-diagonal block are not separated.
    #[error("degenerate singular values: {0}")]
    DegenerateSingularValues(String),
    /// The `b` factor of a group element is not quasi-diagonal.
    #[error("b factor is not quasi-diagonal (defect {0:e})")]
    NotQuasiDiagonal(f64),
    /// An eigenvalue of a unitary matrix deviates from the unit circle.
    #[error("spectrum off the unit circle (deviation {0:e})")]
    SpectrumOffCircle(f64),
    /// Two poles of a rational function coincide.
    #[error("pole collision: {0}")]
    PoleCollision(String),
    /// A projected integration step moved too far off the manifold.
    #[error("step rejected: {0}")]
    StepRejected(String),
    /// A fixed-point iteration did not converge.
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    /// A triple failed admissibility verification.
    #[error("triple is not admissible (max residual {0:e})")]
    NotAdmissible(f64),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
