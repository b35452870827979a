use thiserror::Error;

use crate::complexity::classical::ProjectionReport;
use crate::complexity::quantum::QuantumProjectionReport;

/// Errors raised by the geometry, quadrature and projection routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("spectral function undefined at eigenvalue {0:e}")]
    DomainError(f64),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("tangent vector violates its constraint (residual {0:e})")]
    InvalidTangent(f64),

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature did not converge: worst interval [{lo}, {hi}] with residual {residual:e} after {subdivisions} subdivisions"
    )]
    QuadratureNotConverged {
        lo: f64,
        hi: f64,
        residual: f64,
        subdivisions: usize,
    },

    #[error("speed function returned {value} at t = {t}")]
    InvalidSpeed { t: f64, value: f64 },

    #[error("finite-difference step {0} leaves the manifold")]
    StepTooLarge(f64),

    #[error("invalid site subset: {0}")]
    InvalidSubset(String),

    #[error("partial trace needs at least one kept site")]
    EmptyKeepSet,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("iterative proportional fitting did not converge (residual {:e})", .0.residual)]
    IpfNotConverged(Box<ProjectionReport>),

    #[error("Gibbs projection did not converge (gradient residual {:e})", .0.gradient_residual)]
    GibbsNotConverged(Box<QuantumProjectionReport>),
}

pub type Result<T> = std::result::Result<T, Error>;
