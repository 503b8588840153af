//! Deterministic artifact serialization.
//!
//! Every run produces one [`Artifact`]: a column table plus ordered metadata,
//! renderable as CSV (`#`-prefixed header comments, comma-separated rows,
//! `\n` endings) or as a JSON document that additionally carries the
//! command's structured result. Formatting is fixed — 12 significant digits,
//! fixed column order, no timestamps — so identical configs yield
//! byte-identical files regardless of thread count.

use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::Result;

/// One value rendered with 12 significant digits, deterministically.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

/// Optional value: empty cell when absent.
pub fn sig12_opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// A rectangular, pre-formatted result table.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width matches header");
        self.rows.push(row);
    }
}

/// The complete output of one run.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    /// The fully resolved configuration that produced this artifact.
    pub config: RunConfig,
    /// Ordered (key, value) metadata: parameters, tolerances, summaries.
    pub metadata: Vec<(String, String)>,
    /// Numerical flags encountered during the run (empty means clean).
    pub warnings: Vec<String>,
    pub table: Table,
    /// Structured result for JSON consumers (traced lines, fits, …).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
}

impl Artifact {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            config: config.clone(),
            metadata: Vec::new(),
            warnings: Vec::new(),
            table: Table::default(),
            result: None,
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    /// Attach the structured result (serialized immediately, so later
    /// mutation of the source is harmless).
    pub fn attach<T: Serialize>(&mut self, value: &T) {
        self.result = Some(serde_json::to_value(value).expect("result serializes"));
    }

    /// CSV rendering: `#` metadata header (command, full config, parameters,
    /// warnings), then the column header, then the data rows.
    pub fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command: {}\n", self.config.command));
        out.push_str(&format!("# config: {}\n", self.config.to_json_line()));
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        out.push_str(&self.table.columns.join(","));
        out.push('\n');
        for row in &self.table.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON rendering of the whole artifact (config, metadata, warnings,
    /// table, structured result).
    pub fn json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("artifact serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    /// Write to the config's `out` path, or stdout when absent.
    pub fn emit(&self) -> Result<()> {
        let text = self.render(self.config.format);
        match &self.config.out {
            Some(path) => write_atomically(path, &text),
            None => {
                io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn write_atomically(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}
