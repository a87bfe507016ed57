//! Output envelopes and writers.
//!
//! Every artifact the binary emits carries the crate version, the seed when
//! randomness was involved, and an echo of the settings that produced it, so
//! a result file alone is enough to rerun the computation.

use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use crate::CliError;

/// Wrapper written around every result.
#[derive(Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub artifact: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: C,
    pub result: R,
}

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot serialize result: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Write `text` to `path`, or to stdout when no path was given.
pub fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// `name,value` CSV used for flat summaries. Floats carry 17 significant
/// digits so a round trip loses nothing.
pub struct KeyValueCsv {
    body: String,
}

impl KeyValueCsv {
    pub fn new() -> Self {
        KeyValueCsv { body: String::from("name,value\n") }
    }

    pub fn float(&mut self, name: &str, value: f64) {
        self.body.push_str(&format!("{name},{value:.16e}\n"));
    }

    pub fn raw(&mut self, name: &str, value: impl std::fmt::Display) {
        self.body.push_str(&format!("{name},{value}\n"));
    }

    pub fn finish(self) -> String {
        self.body
    }
}
