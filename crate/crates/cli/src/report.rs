use std::fmt;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{Map, Value};

use polytile::{Error, IntVec, Lattice};

/// Machine-readable summary of one command run. Keys are sorted, so equal
/// runs serialize identically unless wall time is requested.
#[derive(Serialize, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub instance: Map<String, Value>,
    pub verdicts: Map<String, Value>,
    pub counts: Map<String, Value>,
    pub witnesses: Vec<Value>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..Default::default()
        }
    }

    /// Indented JSON with arrays of scalars kept on one line.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is plain data");
        let mut out = String::new();
        render(&value, 0, &mut out);
        out.push('\n');
        out
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::from(k.as_str()).to_string());
                out.push_str(": ");
                render(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                render(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn vector(v: &[i64]) -> Value {
    Value::from(v.to_vec())
}

pub fn vectors<'a>(vs: impl IntoIterator<Item = &'a IntVec>) -> Value {
    Value::Array(vs.into_iter().map(|v| vector(v)).collect())
}

pub fn basis(l: &Lattice) -> Value {
    vectors(l.basis())
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Core(Error::BudgetExceeded { .. } | Error::Overflow) => ExitCode::from(3),
            CliError::Core(Error::InvalidTiling) => ExitCode::from(1),
            CliError::Core(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
