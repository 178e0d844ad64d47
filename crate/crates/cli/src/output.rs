use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "text",
        }
    }
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Violations = 1,
    Usage = 2,
    Inconclusive = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Inconclusive(String),
    Io(io::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Usage(_) => Status::Usage,
            CliError::Inconclusive(_) | CliError::Io(_) => Status::Inconclusive,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Inconclusive(m) => write!(f, "inconclusive: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<valtree::Error> for CliError {
    fn from(e: valtree::Error) -> Self {
        match e {
            valtree::Error::Inconclusive(m) => CliError::Inconclusive(m),
            valtree::Error::Overflow(_) => CliError::Inconclusive(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

/// Command payload plus the status it should exit with.
pub struct Outcome {
    pub payload: String,
    pub status: Status,
}

impl Outcome {
    pub fn ok(payload: String) -> Self {
        Outcome {
            payload,
            status: Status::Success,
        }
    }
}

/// JSON wrapper carrying the tool version and the full parameter echo.
pub fn envelope(command: &str, parameters: Value, result: Value) -> String {
    let doc = json!({
        "tool": "valtree",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "parameters": parameters,
        "format": "json",
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Values beyond `u64` do not fit a JSON number and are reported, not truncated.
pub fn to_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Inconclusive(format!("JSON encoding: {e}")))
}

pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

pub fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("{command} does not support --format {}", format.name()))
}

pub fn emit(payload: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, payload),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(payload.as_bytes())?;
            lock.flush()
        }
    }
}
