//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eig:.3e})")]
    NotPSD { min_eig: f64 },
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
    #[error("Stein equation not convergent: rho(Z) rho(alpha) = {product:.6}")]
    NotConvergent { product: f64 },
    #[error("doubling iteration stalled after {iterations} steps")]
    IterationLimit { iterations: usize },
    #[error("truncation order exceeds cap {cap}")]
    OrderOverflow { cap: usize },
    #[error("Gramian P is not strictly positive (min eigenvalue {min_eig:.3e})")]
    PNotStrictlyPositive { min_eig: f64 },
    #[error("Pick operator is not strictly positive (min eigenvalue {min_eig:.3e})")]
    LambdaNotStrictlyPositive { min_eig: f64 },
    #[error("resolvent is numerically singular")]
    ResolventSingular,
    #[error("Schur parameter is not contractive (norm {norm:.6})")]
    ParameterNotContractive { norm: f64 },
    #[error("feedback loop is numerically singular")]
    FeedbackSingular,
    #[error("entropy truncation did not converge up to order {order}")]
    NoConvergence { order: usize },
    #[error("quadrature node {node} has non-positive determinant")]
    QuadratureDegenerate { node: usize },
    #[error("pair is not co-isometric (residual {residual:.3e})")]
    NotCoisometricPair { residual: f64 },
    #[error("state operator is not stable (spectral radius {radius:.6})")]
    UnstableState { radius: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
}
