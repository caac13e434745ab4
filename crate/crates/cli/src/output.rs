use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use serde_json::Value;

pub use mstratio::numfmt::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Library(mstratio::Error),
    AuditFailed(Vec<String>),
    Io(PathBuf, io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Library(_) => 3,
            CliError::AuditFailed(_) => 4,
            CliError::Io(..) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::AuditFailed(names) => write!(f, "audit failed: {}", names.join(", ")),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<mstratio::Error> for CliError {
    fn from(e: mstratio::Error) -> CliError {
        match e {
            mstratio::Error::UnknownConstruction(_) => CliError::Config(e.to_string()),
            e => CliError::Library(e),
        }
    }
}

/// Writes `text` to the path, or to stdout for `-`.
pub fn write_out(out: &str, text: &str) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .and_then(|()| stdout.flush())
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e));
    }
    std::fs::write(out, text).map_err(|e| CliError::Io(PathBuf::from(out), e))
}

/// Copy of `value` with every float cut to twelve significant digits.
pub fn rounded(value: &Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            fmt(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.iter().map(rounded).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, v)| (k.clone(), rounded(v))).collect()),
        other => other.clone(),
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json(value: &Value) -> String {
    serde_json::to_string_pretty(&rounded(value)).expect("json value serializes") + "\n"
}
