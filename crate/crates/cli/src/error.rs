use thiserror::Error;

/// Failures mapped onto the process exit codes.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("input error: {0}")]
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Input(_) => 4,
        }
    }
}

impl From<mdim_core::Error> for Failure {
    fn from(e: mdim_core::Error) -> Self {
        use mdim_core::Error as E;
        match e {
            E::InvalidInput(_) | E::OutOfRange(_) | E::Json(_) => Failure::Input(e.to_string()),
            E::ResourceLimit(_) => Failure::Budget(e.to_string()),
            E::Inconsistency(_) | E::Numerical(_) => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub(crate) fn input<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Input(msg.into()))
}
