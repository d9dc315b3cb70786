use gridhom_core::combinators::CombinatorError;
use gridhom_core::homology::HomologyError;
use gridhom_core::moves::MoveError;
use gridhom_core::oracle::OracleError;
use gridhom_core::DiagramError;
use thiserror::Error;

/// Everything that ends a run early. Each variant has a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Balance(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Balance(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::Syntax { .. } => CliError::Parse(e.to_string()),
            DiagramError::Validation { .. } | DiagramError::Trace(_) => CliError::Validation(e.to_string()),
            DiagramError::Balance { .. } | DiagramError::WeightCount { .. } => CliError::Balance(e.to_string()),
        }
    }
}

impl From<CombinatorError> for CliError {
    fn from(e: CombinatorError) -> Self {
        match e {
            CombinatorError::Diagram(d) => d.into(),
            CombinatorError::WeightMismatch { .. } => CliError::Balance(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MoveError> for CliError {
    fn from(e: MoveError) -> Self {
        match e {
            MoveError::Diagram(d) => d.into(),
            MoveError::AtStep { step, source } => match CliError::from(*source) {
                CliError::Validation(m) => CliError::Validation(format!("step {step}: {m}")),
                other => other,
            },
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge(_) => CliError::Validation(e.to_string()),
            OracleError::NotAComplex => CliError::Internal(e.to_string()),
        }
    }
}
