use hopfjoin::Interval;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("{0}")]
    Io(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 2 for configuration and file-system problems, 3 for numeric failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn prefixed(self, context: &str) -> Self {
        match self {
            CliError::Config(m) => CliError::Config(format!("{context}: {m}")),
            CliError::Numeric(m) => CliError::Numeric(format!("{context}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{context}: {m}")),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<hopfjoin::Error> for CliError {
    fn from(e: hopfjoin::Error) -> Self {
        use hopfjoin::Error as E;
        match e {
            E::InvalidParams(_) | E::NotMorphismRegime | E::Parse(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// Attaches the branch and the parameter value to a core error.
pub fn at(branch: Interval, s: f64) -> impl FnOnce(hopfjoin::Error) -> CliError {
    move |e| CliError::from(e).prefixed(&format!("branch {}, s = {s:?}", branch.label()))
}

pub fn on_branch(branch: Interval) -> impl FnOnce(hopfjoin::Error) -> CliError {
    move |e| CliError::from(e).prefixed(&format!("branch {}", branch.label()))
}
