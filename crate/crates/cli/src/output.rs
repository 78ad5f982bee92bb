//! Provenance headers and probability formatting shared by all commands.

use std::fs;
use std::io::Write;
use std::path::Path;

use ringlab_analyzer::BigProb;
use serde_json::{json, Value};

use crate::error::{CliError, Result};

/// Probabilities below this are written as `log2`.
pub const LOG2_BELOW: f64 = 1e-12;

pub const SECURITY_NOTE: &str = "security-bit estimates are not reproduced; they need an external lattice estimator";

/// Machine-readable record of how an output was produced.
pub fn provenance(command: &str, settings: Value) -> Value {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(first) = argv.first_mut() {
        *first = "ringlab".into();
    }
    json!({
        "tool": "ringlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "argv": argv,
        "settings": settings,
    })
}

pub fn csv_provenance(prov: &Value) -> String {
    format!("# provenance: {prov}\n")
}

/// `{"value": p}` or `{"log2": log2 p}` for small probabilities.
pub fn prob_json(p: &BigProb) -> Value {
    let v = p.to_f64();
    if v >= LOG2_BELOW {
        json!({ "value": v })
    } else {
        json!({ "log2": finite_or_null(p.log2()) })
    }
}

/// Plain decimal, or `2^x` for small probabilities.
pub fn prob_text(p: &BigProb) -> String {
    let v = p.to_f64();
    if v >= LOG2_BELOW {
        format!("{v:.9e}")
    } else if p.is_zero() {
        "0".into()
    } else {
        format!("2^{:.6}", p.log2())
    }
}

pub fn log2_text(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.6}")
    }
}

pub fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
