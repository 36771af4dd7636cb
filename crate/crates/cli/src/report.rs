use std::fmt;
use std::path::Path;

use qdisc::Tolerances;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Validation = 1,
    CheckFailed = 2,
    Io = 3,
    Unsupported = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self {
            exit,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<qdisc::Error> for CliError {
    fn from(e: qdisc::Error) -> Self {
        use qdisc::Error::*;
        let exit = match &e {
            Parse { .. } | Io(_) => Exit::Io,
            CertificateFailed { .. } | NotUnambiguous { .. } | InternalInconsistency(_) => {
                Exit::CheckFailed
            }
            NotCommuting { .. } => Exit::Unsupported,
            _ => Exit::Validation,
        };
        let message = match &e {
            Parse { .. } | Io(_) => e.to_string(),
            _ => format!("error: {e}"),
        };
        Self::new(exit, message)
    }
}

/// A file read from disk with its SHA-256 digest.
pub struct Input {
    pub path: String,
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::new(Exit::Io, format!("i/o error: {}: {e}", path.display())))?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|_| {
            CliError::new(Exit::Io, format!("parse error: {}: not valid UTF-8", path.display()))
        })?;
        Ok(Self {
            path: path.display().to_string(),
            text,
            sha256,
        })
    }
}

/// Result of one subcommand before it is wrapped into a report.
pub struct Outcome {
    pub inputs: Vec<Input>,
    pub results: Value,
    pub human: String,
    pub exit: Exit,
}

pub struct CliReport<'a> {
    pub command: &'a str,
    pub args: &'a [String],
    pub tolerances: &'a Tolerances,
    pub outcome: &'a Outcome,
}

impl CliReport<'_> {
    pub fn to_value(&self) -> Value {
        let inputs: Vec<Value> = self
            .outcome
            .inputs
            .iter()
            .map(|i| json!({"path": i.path, "sha256": i.sha256}))
            .collect();
        json!({
            "command": {"name": self.command, "args": self.args},
            "version": VERSION,
            "inputs": inputs,
            "tolerances": self.tolerances.to_value(),
            "exit_code": self.outcome.exit as i32,
            "results": self.outcome.results,
        })
    }
}

/// 17 significant digits, matching the JSON output.
pub fn real(x: f64) -> String {
    qdisc::json::format_f64(x).trim_matches('"').to_string()
}
