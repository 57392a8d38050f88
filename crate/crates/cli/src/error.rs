use thiserror::Error;

use crate::config::Finding;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration is not valid TOML: {0}")]
    Parse(String),
    #[error("configuration has {} problem(s):\n{}", .0.len(), list(.0))]
    Validation(Vec<Finding>),
    #[error("numerical failure: {0}")]
    Numerical(mlock_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

fn list(findings: &[Finding]) -> String {
    findings.iter().map(|f| format!("  {f}")).collect::<Vec<_>>().join("\n")
}

impl From<mlock_core::Error> for CliError {
    fn from(e: mlock_core::Error) -> Self {
        match e {
            // precondition failures are configuration problems
            mlock_core::Error::Domain(msg) => CliError::Validation(vec![Finding {
                key: "parameters".into(),
                message: msg,
            }]),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
