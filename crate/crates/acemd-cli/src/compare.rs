//! `compare`: decompose several series over their shared calendar span and
//! measure how far apart their mode-frequency ladders sit.

use std::path::PathBuf;

use acemd::{
    frequency_deviation, rolling_spectrum, SpectrumSummary, TimeSeries, MIN_INGEST_LEN,
};
use chrono::NaiveDate;
use clap::Args;

use crate::error::{analysis_err, CliError, Result};
use crate::ingest::load_series;
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, fmt, write_csv, write_json};
use crate::pipeline::{MethodArg, PipelineArgs, PipelineOutcome};

#[derive(Debug, Args)]
pub struct CompareCmd {
    /// Two or more CSV files to compare; the first is the benchmark for
    /// rolling comparisons.
    #[arg(long, num_args = 2.., required = true)]
    pub input: Vec<PathBuf>,
    /// Numeric column to analyze (same name in every file).
    #[arg(long, default_value = "close")]
    pub column: String,
    /// Date column (same name in every file).
    #[arg(long = "date-column", default_value = "date")]
    pub date_column: String,
    /// Analyze log values — the default, matching price inputs.
    #[arg(long, overrides_with = "no_log")]
    pub log: bool,
    /// Analyze raw values as-is.
    #[arg(long, overrides_with = "log")]
    pub no_log: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Rolling window length (observations). Omit to compare whole spans only.
    #[arg(long)]
    pub window: Option<usize>,
    /// Stride between rolling windows.
    #[arg(long, default_value_t = 21)]
    pub step: usize,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

/// One input after trimming and decomposition.
struct ComparedSeries {
    label: String,
    series: TimeSeries,
    outcome: PipelineOutcome,
    summary: SpectrumSummary,
}

impl CompareCmd {
    pub fn run(&self, argv: &[String]) -> Result<()> {
        if self.window.is_some() && !matches!(self.pipeline.method, MethodArg::Ace | MethodArg::Emd)
        {
            return Err(CliError::Usage(
                "rolling comparison supports --method ace or emd".into(),
            ));
        }

        let use_log = !self.no_log;
        let mut loaded = Vec::new();
        for path in &self.input {
            loaded.push(load_series(path, &self.column, &self.date_column, use_log)?);
        }
        let labels = dedup_labels(&loaded);

        // Shared calendar span: latest start to earliest end.
        let start = loaded.iter().map(TimeSeries::start_date).max().unwrap();
        let end = loaded.iter().map(TimeSeries::end_date).min().unwrap();
        if start > end {
            return Err(CliError::Data(format!(
                "date ranges do not overlap (latest start {start}, earliest end {end})"
            )));
        }

        let mut compared = Vec::new();
        for (x, label) in loaded.into_iter().zip(labels) {
            let series = trim_to_span(&x, start, end, &label)?;
            let outcome = self.pipeline.run(&series)?;
            let summary =
                acemd::spectrum_summary(&outcome.decomposition).map_err(analysis_err)?;
            eprintln!(
                "{label}: {} observations in span, {} modes, alpha = {:.4} (R^2 = {:.4})",
                series.len(),
                outcome.decomposition.num_imfs(),
                summary.alpha,
                summary.r_squared
            );
            compared.push(ComparedSeries {
                label,
                series,
                outcome,
                summary,
            });
        }

        ensure_dir(&self.out_dir)?;
        self.write_deviation_matrix(&compared)?;
        self.write_mode_frequencies(&compared)?;
        self.write_exponents(&compared, start, end)?;
        if let Some(window) = self.window {
            self.write_rolling(&compared, window)?;
        }

        let mut inputs = Vec::new();
        for path in &self.input {
            inputs.push(digest_file(path)?);
        }
        RunManifest::new(
            argv,
            self.pipeline.seed,
            inputs,
            serde_json::json!({
                "subcommand": "compare",
                "column": self.column,
                "date_column": self.date_column,
                "log": use_log,
                "window": self.window,
                "step": self.step,
                "out_dir": self.out_dir,
                "span": { "start": start.to_string(), "end": end.to_string() },
                "pipeline": self.pipeline.config_echo(&self.pipeline.config()),
                "sigma_used": compared
                    .iter()
                    .map(|c| serde_json::json!({
                        "input": c.label,
                        "sigma": c.outcome.diagnostics.sigma_used,
                    }))
                    .collect::<Vec<_>>(),
            }),
        )
        .write(&self.out_dir)?;
        Ok(())
    }

    /// Pairwise deviations over the shared fastest modes, written as a
    /// labeled square matrix.
    fn write_deviation_matrix(&self, compared: &[ComparedSeries]) -> Result<()> {
        let mut header: Vec<&str> = vec!["input"];
        header.extend(compared.iter().map(|c| c.label.as_str()));
        let shared = compared
            .iter()
            .map(|c| c.summary.central_frequencies.len())
            .min()
            .unwrap();
        let rows = compared.iter().map(|a| {
            let mut row = vec![a.label.clone()];
            for b in compared {
                let d = frequency_deviation(
                    &truncated(&a.summary, shared),
                    &truncated(&b.summary, shared),
                )
                .expect("truncated summaries have equal mode counts");
                row.push(fmt(d));
            }
            row
        });
        write_csv(
            &self.out_dir.join("frequency_deviation.csv"),
            &header,
            rows,
        )?;
        eprintln!("deviation matrix over the {shared} fastest modes of each series");
        Ok(())
    }

    fn write_mode_frequencies(&self, compared: &[ComparedSeries]) -> Result<()> {
        let mut rows = Vec::new();
        for c in compared {
            for (j, (f, e)) in c
                .summary
                .central_frequencies
                .iter()
                .zip(&c.summary.central_energies)
                .enumerate()
            {
                rows.push(vec![
                    c.label.clone(),
                    (j + 1).to_string(),
                    fmt(*f),
                    fmt(*e),
                ]);
            }
        }
        write_csv(
            &self.out_dir.join("mode_frequencies.csv"),
            &["input", "mode", "central_frequency", "central_energy"],
            rows,
        )
    }

    fn write_exponents(
        &self,
        compared: &[ComparedSeries],
        start: NaiveDate,
        end: NaiveDate,
    ) -> Result<()> {
        let entries: Vec<serde_json::Value> = compared
            .iter()
            .map(|c| {
                serde_json::json!({
                    "input": c.label,
                    "observations": c.series.len(),
                    "span": { "start": start.to_string(), "end": end.to_string() },
                    "modes": c.outcome.decomposition.num_imfs(),
                    "modes_used": c.summary.modes_used,
                    "alpha": c.summary.alpha,
                    "r_squared": c.summary.r_squared,
                    "sigma_used": c.outcome.diagnostics.sigma_used,
                })
            })
            .collect();
        write_json(&self.out_dir.join("exponents.json"), &entries)
    }

    /// Per-window exponents for every input plus the deviation of each window
    /// from the same-index window of the first (benchmark) input.
    fn write_rolling(&self, compared: &[ComparedSeries], window: usize) -> Result<()> {
        let mut per_input = Vec::new();
        for c in compared {
            let mut cfg = self.pipeline.config();
            // Keep whatever amplitude the whole-span run settled on (the grid
            // search result under --auto-sigma, zero under --method emd).
            cfg.noise_sigma = if self.pipeline.method == MethodArg::Emd {
                0.0
            } else {
                c.outcome.diagnostics.sigma_used
            };
            let windows =
                rolling_spectrum(&c.series, window, self.step, &cfg).map_err(analysis_err)?;
            per_input.push(windows);
        }

        let benchmark = &per_input[0];
        let mut rows = Vec::new();
        for (c, windows) in compared.iter().zip(&per_input) {
            for (i, (date, summary)) in windows.iter().enumerate() {
                let deviation = match benchmark.get(i) {
                    Some((_, bench)) => {
                        let shared = summary
                            .central_frequencies
                            .len()
                            .min(bench.central_frequencies.len());
                        fmt(frequency_deviation(
                            &truncated(summary, shared),
                            &truncated(bench, shared),
                        )
                        .expect("truncated summaries have equal mode counts"))
                    }
                    None => String::new(),
                };
                rows.push(vec![
                    c.label.clone(),
                    date.to_string(),
                    fmt(summary.alpha),
                    fmt(summary.r_squared),
                    deviation,
                ]);
            }
        }
        write_csv(
            &self.out_dir.join("rolling_compare.csv"),
            &[
                "input",
                "window_end_date",
                "alpha",
                "r_squared",
                "deviation_from_benchmark",
            ],
            rows,
        )
    }
}

/// Keeps the fastest `k` modes of a summary so two summaries can be compared
/// mode-for-mode; the fitted exponent is left as computed from all modes.
fn truncated(s: &SpectrumSummary, k: usize) -> SpectrumSummary {
    SpectrumSummary {
        central_frequencies: s.central_frequencies[..k].to_vec(),
        central_energies: s.central_energies[..k].to_vec(),
        alpha: s.alpha,
        r_squared: s.r_squared,
        modes_used: k,
    }
}

/// File stems, with `-2`, `-3`, … appended to repeats so columns stay unique.
fn dedup_labels(loaded: &[TimeSeries]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::new();
    for x in loaded {
        let base = x.label().to_string();
        let clashes = labels.iter().filter(|l| {
            **l == base || l.strip_prefix(&base).is_some_and(|s| s.starts_with('-'))
        });
        let n = clashes.count();
        labels.push(if n == 0 {
            base
        } else {
            format!("{base}-{}", n + 1)
        });
    }
    labels
}

/// Restricts a series to the observations inside `[start, end]`.
fn trim_to_span(
    x: &TimeSeries,
    start: NaiveDate,
    end: NaiveDate,
    label: &str,
) -> Result<TimeSeries> {
    let n = x.len();
    let from = (0..n).find(|&i| x.date(i) >= start);
    let to = (0..n).rev().find(|&i| x.date(i) <= end);
    let trimmed = match (from, to) {
        (Some(a), Some(b)) if a <= b => x.window(a, b + 1 - a),
        _ => {
            return Err(CliError::Data(format!(
                "{label} has no observations inside the shared span {start} to {end}"
            )))
        }
    };
    if trimmed.len() < MIN_INGEST_LEN {
        return Err(CliError::Data(format!(
            "{label} has only {} observations inside the shared span {start} to {end} \
             (need at least {MIN_INGEST_LEN})",
            trimmed.len()
        )));
    }
    Ok(trimmed)
}
