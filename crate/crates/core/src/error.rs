use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pad degree {pad} is smaller than the degree {degree}")]
    PadTooSmall { pad: usize, degree: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("declared degree {declared} is below the actual degree {actual} of polynomial {index}")]
    DegreeBoundViolation {
        index: usize,
        declared: usize,
        actual: usize,
    },

    #[error("singular value decomposition did not converge")]
    ConvergenceFailure,

    #[error("input is numerically rank deficient: {0}")]
    RankDeficientInput(String),

    #[error("requested degree {requested} exceeds the admissible maximum {max}")]
    DegreeTooLarge { requested: usize, max: usize },

    #[error("linear solve failed: {0}")]
    LinearSolveFailure(String),

    #[error("problem has an unattainable solution (eigenvalue structure at infinity); retry in reversal mode")]
    UnattainableProblem,

    #[error("no candidate eigenvalues available: {0}")]
    NoCandidates(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
