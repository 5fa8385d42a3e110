//! CSV ingestion: one date column, one numeric column, strict validation.

use std::path::{Path, PathBuf};

use acemd::{log_transform, validate_series, TimeSeries};
use chrono::NaiveDate;
use clap::Args;

use crate::error::{CliError, Result};

/// Shared input flags for every subcommand that reads one series.
#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// CSV file with a header row, ISO-8601 dates, and a numeric column.
    #[arg(long)]
    pub input: PathBuf,
    /// Numeric column to analyze.
    #[arg(long, default_value = "close")]
    pub column: String,
    /// Date column.
    #[arg(long = "date-column", default_value = "date")]
    pub date_column: String,
    /// Analyze log values — the default, matching price inputs.
    #[arg(long, overrides_with = "no_log")]
    pub log: bool,
    /// Analyze raw values as-is.
    #[arg(long, overrides_with = "log")]
    pub no_log: bool,
}

impl IngestArgs {
    pub fn use_log(&self) -> bool {
        !self.no_log
    }

    pub fn load(&self) -> Result<TimeSeries> {
        load_series(&self.input, &self.column, &self.date_column, self.use_log())
    }
}

/// Reads, sorts, validates, and (optionally) log-transforms one series.
///
/// Reports what was ingested on standard error; data never goes to the
/// terminal.
pub fn load_series(
    path: &Path,
    column: &str,
    date_column: &str,
    use_log: bool,
) -> Result<TimeSeries> {
    let file = std::fs::File::open(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader.headers().map_err(crate::error::csv_err)?.clone();
    let find = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Data(format!(
                "{}: no column named '{name}' (found: {})",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(", ")
            ))
        })
    };
    let date_idx = find(date_column)?;
    let value_idx = find(column)?;

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header occupies line 1
        let at = |what: &str| format!("{} line {line}: {what}", path.display());
        let record = record.map_err(|e| CliError::Data(at(&e.to_string())))?;
        let date_raw = record
            .get(date_idx)
            .ok_or_else(|| CliError::Data(at("missing date field")))?;
        let date: NaiveDate = date_raw
            .parse()
            .map_err(|e| CliError::Data(at(&format!("bad date '{date_raw}': {e}"))))?;
        let value_raw = record
            .get(value_idx)
            .ok_or_else(|| CliError::Data(at("missing value field")))?;
        let value: f64 = value_raw
            .parse()
            .map_err(|e| CliError::Data(at(&format!("bad value '{value_raw}': {e}"))))?;
        rows.push((date, value));
    }

    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    let series = validate_series(&label, rows)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;

    let out = if use_log {
        log_transform(&series).map_err(|e| match &e {
            acemd::Error::NonPositivePrice { index, value } => CliError::Data(format!(
                "{}: non-positive value {value} on {} cannot be log-transformed \
                 (pass --no-log for non-price data)",
                path.display(),
                series.date(*index)
            )),
            _ => CliError::Data(format!("{}: {e}", path.display())),
        })?
    } else {
        series
    };

    eprintln!(
        "ingested {} observations from {} ({} to {}, column '{column}'{})",
        out.len(),
        path.display(),
        out.start_date(),
        out.end_date(),
        if use_log { ", log values" } else { "" }
    );
    Ok(out)
}
