use thiserror::Error;

/// Errors produced by the numerical engines.
#[derive(Debug, Error)]
pub enum Error {
    /// Truncation tail mass exceeded the configured tolerance.
    #[error("tail mass {mass:.3e} >= tolerance {tol:.3e} at Fock dimension {dim}")]
    Tail { mass: f64, tol: f64, dim: usize },

    /// An iterative routine failed its internal tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// An input is outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An information matrix is singular relative to the configured
    /// determinant threshold. This marks the sloppy regime, not a bug.
    #[error("singular information matrix")]
    Singular,

    /// The derivative-free optimizer exhausted its evaluation budget.
    #[error("optimization failure: {0}")]
    Optimization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
