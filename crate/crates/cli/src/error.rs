use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] snf_core::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_STALLED: i32 = 2;
pub const EXIT_UNATTAINABLE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use snf_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Validation(_) => EXIT_INVALID,
            CliError::Core(E::UnattainableProblem) => EXIT_UNATTAINABLE,
            CliError::Core(
                E::PadTooSmall { .. }
                | E::DimensionMismatch(_)
                | E::DegreeBoundViolation { .. }
                | E::RankDeficientInput(_)
                | E::DegreeTooLarge { .. }
                | E::InvalidArgument(_),
            ) => EXIT_INVALID,
            CliError::Core(_) => EXIT_FAILURE,
        }
    }
}
