use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write(dir, name, &text)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<stripedbox_core::Complex64> for ComplexValue {
    fn from(z: stripedbox_core::Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}
