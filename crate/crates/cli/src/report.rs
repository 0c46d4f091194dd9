//! Report assembly and rendering.
//!
//! JSON reports carry five top-level keys: `version`, `config`, `results`,
//! `flags`, `anchors`. They are emitted through `serde_json::Value`, whose
//! maps order keys canonically, so parsing a report and re-serializing it
//! reproduces the bytes exactly. Text output is a fixed-width table at
//! four significant digits; JSON keeps full precision.

use serde::Serialize;
use serde_json::Value;

use crate::args::{CliError, CliResult};
use crate::config::{OutputFormat, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub config: Value,
    pub results: Value,
    pub flags: Vec<String>,
    pub anchors: Value,
}

impl Report {
    pub fn new(
        config: &RunConfig,
        results: Value,
        flags: Vec<String>,
        anchors: &[(&str, &str)],
    ) -> CliResult<Self> {
        let anchor_map: serde_json::Map<String, Value> = anchors
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect();
        Ok(Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::to_value(config)
                .map_err(|e| CliError::internal(format!("config serialization: {e}")))?,
            results,
            flags,
            anchors: Value::Object(anchor_map),
        })
    }

    /// Canonical JSON bytes (sorted keys, pretty, trailing newline).
    pub fn to_json(&self) -> CliResult<String> {
        let value = serde_json::to_value(self)
            .map_err(|e| CliError::internal(format!("report serialization: {e}")))?;
        let mut s = serde_json::to_string_pretty(&value)
            .map_err(|e| CliError::internal(format!("report serialization: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// Four-significant-digit numeric rendering for text tables.
pub fn sig4(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if (-3..=6).contains(&magnitude) {
        let decimals = (3 - magnitude).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.3e}")
    }
}

/// Two-column fixed-width table.
pub fn text_table(title: &str, rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0).max(12);
    let mut out = format!("{title}\n");
    for (k, v) in rows {
        out.push_str(&format!("  {k:<width$}  {v}\n"));
    }
    out
}

/// Writes the rendered report to the configured sink and echoes JSON/text
/// to stdout when writing to a file.
pub fn emit(report: &Report, config: &RunConfig, text: String) -> CliResult<()> {
    let rendered = match config.output.format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Text | OutputFormat::Csv => text,
    };
    match &config.output.path {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| CliError::internal(format!("cannot write {path}: {e}")))?;
            // A file sink still reports where the artifact went.
            println!("wrote {path}");
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

/// Optimizer reports always produce both renderings: the JSON report goes
/// to the path when one is set (stdout in json mode otherwise) and the
/// human-readable table prints alongside.
pub fn emit_with_table(report: &Report, config: &RunConfig, text: String) -> CliResult<()> {
    match (&config.output.path, config.output.format) {
        (Some(path), _) => {
            std::fs::write(path, report.to_json()?)
                .map_err(|e| CliError::internal(format!("cannot write {path}: {e}")))?;
            print!("{text}");
            println!("wrote {path}");
        }
        (None, OutputFormat::Json) => print!("{}", report.to_json()?),
        (None, _) => print!("{text}"),
    }
    Ok(())
}
