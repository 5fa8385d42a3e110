//! File output helpers: full-precision CSV and pretty JSON.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{csv_err, Result};

/// Renders a float with 17 significant digits, enough to round-trip f64
/// exactly; reconstruction identities survive a write/read cycle.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}
