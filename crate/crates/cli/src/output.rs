use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TOOL: &str = "sascorr";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `#` comment lines carrying tool, version, command and resolved config.
pub fn preamble<C: Serialize>(command: &str, config: &C) -> Vec<String> {
    vec![
        format!("{TOOL} {VERSION}"),
        format!("command {command}"),
        format!("config {}", serde_json::to_string(config).expect("config serializes")),
    ]
}

/// JSON document with the same metadata as [`preamble`] and a payload.
pub fn document<C: Serialize, R: Serialize>(command: &str, config: &C, key: &str, result: &R) -> String {
    let mut doc = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "config": config,
    });
    doc[key] = serde_json::to_value(result).expect("result serializes");
    let mut s = serde_json::to_string_pretty(&doc).expect("value serializes");
    s.push('\n');
    s
}

pub fn csv_with_preamble(preamble: &[String], header: &str, rows: &[String]) -> String {
    let mut out = String::new();
    for line in preamble {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

pub fn write(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Output { path: path.clone(), source })?;
    Ok(path)
}

/// Renders a float for CSV, `NaN` for missing values.
pub fn num(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "NaN".to_string(),
    }
}
