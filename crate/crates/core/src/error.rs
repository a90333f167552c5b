use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation time lies within the guard band of a collapse time.
    #[error("t = {t} is within {guard:e} of collapse time {collapse} (n = {n})")]
    CollapseProximity {
        t: f64,
        collapse: f64,
        guard: f64,
        n: u32,
    },

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("basis dimension {dim} too small (need at least {min})")]
    Dimension { dim: usize, min: usize },

    #[error("coherent-state tail mass {tail_mass:e} exceeds {tol:e} at dimension cap {dim}")]
    TailMass { tail_mass: f64, tol: f64, dim: usize },

    #[error("oracle not converged at dimension {dim}: delta {delta:e} > tol {tol:e}")]
    Convergence { dim: usize, delta: f64, tol: f64 },

    #[error("symbol degree {degree} exceeds cap {cap}")]
    Degree { degree: u32, cap: u32 },

    #[error("stencil point ({alpha_re}, {alpha_im}, t = {t}) not evaluable: {reason}")]
    Stencil {
        alpha_re: f64,
        alpha_im: f64,
        t: f64,
        reason: String,
    },

    #[error("breakdown not found for hbar = {hbar:e} within t_max = {t_max}")]
    BreakdownNotFound { hbar: f64, t_max: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
