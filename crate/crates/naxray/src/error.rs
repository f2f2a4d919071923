use std::path::PathBuf;

use naxray_core::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed document: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for validation failures, 3 when the data leave the domain of a
    /// reconstruction step.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Domain(_) | Error::Singular(_) | Error::NotInTDoublePrime(_)) => 3,
            _ => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::Domain("log".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::Singular("pivot".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::MissingRay("ray".into())).exit_code(), 2);
        assert_eq!(CliError::usage("flag").exit_code(), 2);
    }
}
