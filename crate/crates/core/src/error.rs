use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("subspaces do not match: {0}")]
    DimensionMismatch(String),
    #[error("rank deficient: {rank} independent columns out of {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("singular value iteration did not converge")]
    SvdNoConvergence,
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("need at least two subspaces, got {0}")]
    TooFewSubspaces(usize),
    #[error("operation requires one-dimensional subspaces (c = 1), got c = {0}")]
    NotLines(usize),
    #[error("traceless embedding undefined when the subspace is the whole space (c = d = {0})")]
    FullSpace(usize),
    #[error("basis {index} is not orthonormal (deviation {defect:.3e} exceeds {tol:.1e})")]
    NotOrthonormal { index: usize, defect: f64, tol: f64 },
    #[error("objective became non-finite; step size too large")]
    NonFiniteObjective,
    #[error("certificate equality check failed: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SvdNoConvergence | Error::NonFiniteObjective | Error::Inconsistent(_)
        )
    }
}
