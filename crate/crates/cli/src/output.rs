//! Serialized writing of JSON documents and CSV tables.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, Context};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Header shared by every output: command, version, threads and the resolved config.
pub fn metadata(ctx: &Context, command: &str, config: &impl Serialize) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "threads": ctx.threads,
        "config": config,
    })
}

fn io(path: Option<&Path>, e: std::io::Error) -> CliError {
    match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(e.to_string()),
    }
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| io(None, e))
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: Option<&Path>, doc: &Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON serializes");
    s.push('\n');
    emit(path, s.as_bytes())
}

/// CSV with a header row and LF line endings. The metadata goes to
/// `<path>.meta.json` next to a file, or as one line on stderr otherwise.
pub fn write_csv(
    path: Option<&Path>,
    header: &[&str],
    rows: &[Vec<String>],
    meta: &Value,
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    emit(path, &bytes)?;
    match path {
        Some(p) => {
            let mut side = PathBuf::from(p).into_os_string();
            side.push(".meta.json");
            write_json(Some(Path::new(&side)), meta)
        }
        None => {
            eprintln!("{}", serde_json::to_string(meta).expect("JSON serializes"));
            Ok(())
        }
    }
}

/// Shortest round-trip decimal form; empty for a missing value.
pub fn num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
