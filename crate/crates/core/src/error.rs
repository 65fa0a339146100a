use thiserror::Error;

/// Errors surfaced by closure evaluation, eigen-sensitivity analysis and the
/// solvers. Solver non-convergence is reported through `SolveReport`, not
/// through this enum.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Eigenvector sensitivities requested with an eigenvalue gap below the
    /// tolerance; the offending consumer is named in `context`.
    #[error("degenerate eigenvalues (gap {gap:.3e} < tol {tol:.3e}) in {context}")]
    DegenerateEigenvalues {
        gap: f64,
        tol: f64,
        context: &'static str,
    },

    /// The spatial diffusion tensor divides by the shear-rate magnitude.
    #[error("zero shear-rate magnitude while evaluating {0}")]
    ZeroShearRate(&'static str),

    /// L = 0: every rate term vanishes identically.
    #[error("zero velocity gradient: the residual vanishes identically")]
    ZeroFlow,

    /// A closure hit a removable singularity (e.g. HL2 at full alignment).
    #[error("singular closure state: {0}")]
    Singularity(String),

    #[error("unknown kind: {0}")]
    UnknownKind(String),

    /// An RK4 iterate stopped being finite.
    #[error("non-finite state reached at t = {time}")]
    NonFiniteState { time: f64 },

    /// Even the augmented Newton system could not be solved.
    #[error("jacobian numerically singular")]
    SingularJacobian,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
