//! Command-line front end for `ifba-core`: one JSON report per run, plus a
//! CSV flattening of several reports of the same command.

mod commands;
mod config;
mod summary;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use config::{Command, RunConfig};
pub use summary::{emit_csv_summary, summary_columns};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Bad input: malformed model spec, missing file, out-of-domain numeric.
/// The message starts with the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A checked guarantee failed (e.g. a witness for an invertible element).
    AssertionFailed,
    /// A series was abandoned; the result carries the term-norm trace.
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: Command,
    pub config: RunConfig,
    pub status: Status,
    pub result: Value,
    /// Seconds since the Unix epoch; excluded from determinism comparisons.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Report,
}

impl RunOutput {
    pub(crate) fn new(config: RunConfig, status: Status, result: Value) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            report: Report {
                command: config.command,
                config,
                status,
                result,
                timestamp,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.report.status {
            Status::Ok => EXIT_OK,
            Status::AssertionFailed | Status::Diverged => EXIT_ASSERTION,
        }
    }

    pub fn to_json(&self) -> String {
        report_json(&self.report)
    }
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Resolves defaults and runs one command. Does not write anything.
pub fn run(config: &RunConfig) -> Result<RunOutput, UsageError> {
    commands::dispatch(&config.resolve()?)
}

/// Writes `contents` to a temporary file beside `path`, then renames it into place.
pub fn write_atomically(path: &Path, contents: &[u8]) -> Result<(), UsageError> {
    let io = |e: std::io::Error| UsageError::new(format!("output: {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs a config and writes its report to `config.output`, or stdout.
pub fn run_and_write(config: &RunConfig) -> Result<i32, UsageError> {
    let out = run(config)?;
    let json = out.to_json();
    match &config.output {
        Some(path) => write_atomically(path, json.as_bytes())?,
        None => print!("{json}"),
    }
    Ok(out.exit_code())
}

/// Report JSON with the timestamp removed, for byte comparisons.
pub fn without_timestamp(json: &str) -> Result<String, serde_json::Error> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timestamp");
    }
    serde_json::to_string(&v)
}
