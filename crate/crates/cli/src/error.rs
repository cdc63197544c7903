use thiserror::Error;

/// Failure classes with stable process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("accuracy: {0}")]
    Accuracy(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Accuracy(_) => 2,
            CliError::Input(_) => 3,
            CliError::Io(_) => 4,
            CliError::Precondition(_) => 5,
        }
    }
}

impl From<triwork::Error> for CliError {
    fn from(e: triwork::Error) -> Self {
        use triwork::Error as E;
        let msg = e.to_string();
        match e {
            E::Accuracy { .. } | E::Numerical(_) => CliError::Accuracy(msg),
            E::InvalidArity(_)
            | E::Normalization(_)
            | E::Shape(_)
            | E::SiteOutOfRange { .. }
            | E::Domain { .. }
            | E::Invariant(_)
            | E::Json(_) => CliError::Input(msg),
            E::Io(_) => CliError::Io(msg),
            E::Argument(_) | E::ZeroProbability(_) | E::NoThreshold(_) | E::NonMonotone(_) => {
                CliError::Precondition(msg)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
