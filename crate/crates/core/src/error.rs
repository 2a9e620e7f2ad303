use thiserror::Error;

/// Errors raised by the phase-space routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),
    #[error("skew pattern must have even positive dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric (residual {residual:.3e})")]
    NotSkew { residual: f64 },
    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("form matrix is singular (det {det:.3e})")]
    NonInvertibleForm { det: f64 },
    #[error("degenerate deformation: f = {f:.3e} vanishes")]
    DegenerateDeformation { f: f64 },
    #[error("matrix is not anti-symplectic")]
    NotAntiSymplectic,
    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("matrix does not preserve the form (residual {residual:.3e})")]
    NotOmegaSymplectic { residual: f64 },
    #[error("Darboux map has no orthogonal representative")]
    NotOrthogonalDarboux,
    #[error("covariance form does not match the map ({0})")]
    FormMismatch(String),
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("form has no conformal scale (ΩᵀΩ is not a multiple of the identity)")]
    NoConformalScale,
    #[error("eigenvalue pairing failed (block residual {residual:.3e})")]
    PairingFailed { residual: f64 },
    #[error("state ({n1}, {n2}) is not the ground state")]
    NotGroundState { n1: u32, n2: u32 },
    #[error("quadrature diverged: norm {norm}")]
    QuadratureDiverged { norm: f64 },
    #[error("|W| = {value:.6e} exceeds bound {bound:.6e} at ({q1}, {q2}, {p1}, {p2})")]
    BoundViolated {
        value: f64,
        bound: f64,
        q1: f64,
        q2: f64,
        p1: f64,
        p2: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_mismatch(expected: impl ToString, got: impl ToString) -> Error {
    Error::ShapeMismatch {
        expected: expected.to_string(),
        got: got.to_string(),
    }
}
