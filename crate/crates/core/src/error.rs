use thiserror::Error;

/// Errors raised by the numerical kernels and model builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("operator is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree of symmetry undefined: operator vanishes after re-biasing")]
    UndefinedDos,

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    Bracketing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("numerical convergence failure: {0}")]
    Convergence(String),

    #[error("quadrature grid of {points} points exceeds the budget of {budget}")]
    GridBudget { points: u128, budget: u128 },

    #[error("Fock cutoff {cutoff} too small: {reason}")]
    CutoffTooSmall { cutoff: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of an iterative or adaptive numerical method.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence(_) | Error::Bracketing { .. })
    }
}
