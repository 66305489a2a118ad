//! Crate-wide error type.

use thiserror::Error;

/// Failures raised by the sculpture library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SculptError {
    /// Weight beyond the truncation order exceeds the allowed budget.
    #[error("truncation at n_max = {n_max} drops weight {lost:.3e}")]
    Truncation { n_max: usize, lost: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The synthesized projection has (numerically) zero probability.
    #[error("degenerate projection: squared norm {norm:.3e}")]
    DegenerateProjection { norm: f64 },

    #[error("no finite root passes the residual check")]
    NoFiniteRoot,

    #[error("no multistart run converged; best residual {best_residual:.3e}")]
    ConvergenceFailure { best_residual: f64 },

    #[error("negative Fock index {index}")]
    Index { index: i64 },

    /// The requested fidelity is not reachable for this lambda (arccos argument outside [-1, 1]).
    #[error("outside the iso-fidelity cone: arccos argument {arg:.6}")]
    OutOfCone { arg: f64 },

    #[error("grid too coarse: integrated Wigner function is {norm:.6}")]
    GridTooCoarse { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl SculptError {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            SculptError::Truncation { .. } => "truncation",
            SculptError::DimensionMismatch { .. } => "dimension_mismatch",
            SculptError::DegenerateProjection { .. } => "degenerate_projection",
            SculptError::NoFiniteRoot => "no_finite_root",
            SculptError::ConvergenceFailure { .. } => "convergence_failure",
            SculptError::Index { .. } => "index",
            SculptError::OutOfCone { .. } => "out_of_cone",
            SculptError::GridTooCoarse { .. } => "grid_too_coarse",
            SculptError::InvalidParameter(_) => "invalid_parameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, SculptError>;
