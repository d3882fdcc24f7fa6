use thiserror::Error;
use torres_core::differentials::DifferentialError;
use torres_core::numeric::NumericError;
use torres_core::polytopes::PolytopeError;
use torres_core::residue::ResidueError;

use crate::job::fan_error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The job document or the flags are unusable.
    #[error("{0}")]
    Malformed(String),
    /// The input is well formed but violates a mathematical hypothesis.
    #[error("{0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 2,
            CliError::Malformed(_) | CliError::Internal(_) => 1,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CliError::Malformed(_) => "malformed_input",
            CliError::Precondition(_) => "precondition_failed",
            CliError::Internal(_) => "internal_error",
        }
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::Fan(f) => fan_error(f),
            other => CliError::Malformed(other.to_string()),
        }
    }
}

impl From<DifferentialError> for CliError {
    fn from(e: DifferentialError) -> Self {
        match e {
            DifferentialError::Fan(f) => fan_error(f),
            DifferentialError::InexactDivision(_) | DifferentialError::CrossCheck(_) => {
                CliError::Internal(e.to_string())
            }
            other => CliError::Malformed(other.to_string()),
        }
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> Self {
        match e {
            ResidueError::Fan(f) => fan_error(f),
            ResidueError::Polytope(p) => p.into(),
            ResidueError::Differential(d) => d.into(),
            ResidueError::Internal(_) => CliError::Internal(e.to_string()),
            e if e.is_precondition() => CliError::Precondition(e.to_string()),
            other => CliError::Malformed(other.to_string()),
        }
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::Fan(f) => fan_error(f),
            NumericError::Residue(r) => r.into(),
            NumericError::NotSmooth
            | NumericError::Dimension(_)
            | NumericError::CommonZero
            | NumericError::Singular => CliError::Precondition(e.to_string()),
            other => CliError::Malformed(other.to_string()),
        }
    }
}
