use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Convergence(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Convergence(_) => "non_convergence",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

impl From<thermoq::Error> for CliError {
    fn from(e: thermoq::Error) -> Self {
        match e {
            thermoq::Error::NoConvergence(_) => CliError::Convergence(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}
