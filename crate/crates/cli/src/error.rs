use std::path::PathBuf;

use thiserror::Error;

/// Exit status for success.
pub const EXIT_OK: u8 = 0;
/// Exit status when at least one verification check fails.
pub const EXIT_VERIFY_FAILED: u8 = 1;
/// Exit status for malformed input, bad flags or I/O trouble.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] polphase::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_INPUT
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) | CliError::Core(_) => "input",
            CliError::Io { .. } => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json_line(&self) -> String {
        let mut rec = serde_json::Map::new();
        rec.insert("error".into(), self.kind().into());
        if let CliError::Core(polphase::Error::Spec { path, .. }) = self {
            rec.insert("path".into(), path.clone().into());
        }
        rec.insert("message".into(), self.to_string().into());
        serde_json::Value::Object(rec).to_string()
    }
}
