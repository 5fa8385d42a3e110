//! `filter`: timescale split plus volatility and asymmetry statistics.

use std::path::PathBuf;

use acemd::{
    asymmetry_frequencies, conditional_volatility, high_pass, log_returns, low_pass,
    rolling_volatility, volatility, Error, FilteredSeries, TimeSeries,
};
use clap::Args;
use serde::Serialize;

use crate::error::{analysis_err, Result};
use crate::ingest::IngestArgs;
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, fmt, write_csv, write_json};
use crate::pipeline::PipelineArgs;

/// Thresholds the asymmetry frequencies are reported at, besides --epsilon.
const EPSILON_GRID: [f64; 5] = [0.01, 0.02, 0.05, 0.1, 0.2];

#[derive(Debug, Args)]
pub struct FilterCmd {
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Slow components the low-pass keeps; defaults to the complement of
    /// the high-pass order.
    #[arg(long = "low-order")]
    pub low_order: Option<usize>,
    /// Fast modes the high-pass keeps; defaults to 2, or the complement of
    /// --low-order when that is given.
    #[arg(long = "high-order")]
    pub high_order: Option<usize>,
    /// Rolling window in observations for the volatility statistics.
    #[arg(long, default_value_t = 63)]
    pub window: usize,
    /// Asymmetry threshold as a fraction of window volatility.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

/// One rolling window's conditional-volatility triple.
struct WindowStats {
    end_index: usize,
    sigma_plus: f64,
    sigma_minus: f64,
    sigma: f64,
}

#[derive(Serialize)]
struct AsymmetryEntry {
    epsilon: f64,
    p_plus: f64,
    p_minus: f64,
}

#[derive(Serialize)]
struct AsymmetryReport {
    series: String,
    windows_used: usize,
    windows_skipped: usize,
    frequencies: Vec<AsymmetryEntry>,
}

impl FilterCmd {
    pub fn run(&self, argv: &[String]) -> Result<()> {
        let x = self.ingest.load()?;
        let outcome = self.pipeline.run(&x)?;
        let d = &outcome.decomposition;
        let total = d.num_imfs() + 1;

        let (m_l, m_h) = match (self.low_order, self.high_order) {
            (Some(l), Some(h)) => (l, h),
            (Some(l), None) => (l, total.saturating_sub(l).max(1)),
            (None, Some(h)) => (total.saturating_sub(h).max(1), h),
            (None, None) => {
                let h = 2.min(total);
                (total.saturating_sub(h).max(1), h)
            }
        };
        let low = low_pass(d, m_l).map_err(analysis_err)?;
        let high = high_pass(d, m_h).map_err(analysis_err)?;

        if m_l + m_h == total {
            let peak = x
                .values()
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
                .max(f64::MIN_POSITIVE);
            let worst = (0..x.len())
                .map(|t| (low.values()[t] + high.values()[t] - x.values()[t]).abs())
                .fold(0.0f64, f64::max);
            eprintln!(
                "complementary split (low {m_l} + high {m_h} = {total}): \
                 max |low + high - x| = {:.2e} relative",
                worst / peak
            );
        } else {
            eprintln!(
                "non-complementary split (low {m_l} + high {m_h} != {total}); \
                 the sides share or skip modes by request"
            );
        }

        ensure_dir(&self.out_dir)?;
        self.write_filtered(&x, &low, &high)?;

        // Returns of the unfiltered input and of each side of the split.
        let r_all = log_returns(&x).map_err(analysis_err)?;
        let r_low = low.log_returns().map_err(analysis_err)?;
        let r_high = high.log_returns().map_err(analysis_err)?;
        self.write_rolling_volatility(&r_all, &r_low, &r_high)?;

        let mut reports = Vec::new();
        let mut conditional_rows = Vec::new();
        for (name, r) in [("all", &r_all), ("low", &r_low), ("high", &r_high)] {
            let (windows, skipped) = rolling_conditional(r, self.window)?;
            for w in &windows {
                conditional_rows.push(vec![
                    r.date(w.end_index).to_string(),
                    name.to_string(),
                    fmt(w.sigma_plus),
                    fmt(w.sigma_minus),
                    fmt(w.sigma),
                ]);
            }
            reports.push(self.asymmetry_report(name, &windows, skipped)?);
        }
        write_csv(
            &self.out_dir.join("conditional_volatility.csv"),
            &["date", "series", "sigma_plus", "sigma_minus", "sigma"],
            conditional_rows,
        )?;
        write_json(&self.out_dir.join("asymmetry.json"), &reports)?;

        RunManifest::new(
            argv,
            self.pipeline.seed,
            vec![digest_file(&self.ingest.input)?],
            serde_json::json!({
                "subcommand": "filter",
                "column": self.ingest.column,
                "date_column": self.ingest.date_column,
                "log": self.ingest.use_log(),
                "low_order": m_l,
                "high_order": m_h,
                "window": self.window,
                "epsilon": self.epsilon,
                "out_dir": self.out_dir,
                "pipeline": self.pipeline.config_echo(&{
                    let mut cfg = self.pipeline.config();
                    cfg.noise_sigma = outcome.diagnostics.sigma_used;
                    cfg
                }),
            }),
        )
        .write(&self.out_dir)?;

        eprintln!("wrote {}", self.out_dir.join("filtered.csv").display());
        Ok(())
    }

    fn write_filtered(&self, x: &TimeSeries, low: &FilteredSeries, high: &FilteredSeries) -> Result<()> {
        let logged = self.ingest.use_log();
        let mut header = vec!["date", "x", "low", "high"];
        if logged {
            header.extend(["price", "price_low", "price_high"]);
        }
        let rows = (0..x.len()).map(|t| {
            let (xv, lv, hv) = (x.values()[t], low.values()[t], high.values()[t]);
            let mut row = vec![x.date(t).to_string(), fmt(xv), fmt(lv), fmt(hv)];
            if logged {
                row.push(fmt(xv.exp()));
                row.push(fmt(lv.exp()));
                row.push(fmt(hv.exp()));
            }
            row
        });
        write_csv(&self.out_dir.join("filtered.csv"), &header, rows)
    }

    fn write_rolling_volatility(
        &self,
        r_all: &TimeSeries,
        r_low: &TimeSeries,
        r_high: &TimeSeries,
    ) -> Result<()> {
        let va = rolling_volatility(r_all, self.window).map_err(analysis_err)?;
        let vl = rolling_volatility(r_low, self.window).map_err(analysis_err)?;
        let vh = rolling_volatility(r_high, self.window).map_err(analysis_err)?;
        let rows = (0..va.len()).map(|i| {
            vec![
                va.date(i).to_string(),
                fmt(va.values()[i]),
                fmt(vl.values()[i]),
                fmt(vh.values()[i]),
            ]
        });
        write_csv(
            &self.out_dir.join("rolling_volatility.csv"),
            &["date", "vol_all", "vol_low", "vol_high"],
            rows,
        )
    }

    fn asymmetry_report(
        &self,
        name: &str,
        windows: &[WindowStats],
        skipped: usize,
    ) -> Result<AsymmetryReport> {
        let rolls: Vec<(f64, f64, f64)> = windows
            .iter()
            .map(|w| (w.sigma_plus, w.sigma_minus, w.sigma))
            .collect();
        let mut grid: Vec<f64> = EPSILON_GRID.to_vec();
        if !grid.contains(&self.epsilon) {
            grid.push(self.epsilon);
            grid.sort_by(f64::total_cmp);
        }
        let mut frequencies = Vec::new();
        if !rolls.is_empty() {
            for eps in grid {
                let (p_plus, p_minus) =
                    asymmetry_frequencies(&rolls, eps).map_err(analysis_err)?;
                frequencies.push(AsymmetryEntry {
                    epsilon: eps,
                    p_plus,
                    p_minus,
                });
            }
        }
        Ok(AsymmetryReport {
            series: name.to_string(),
            windows_used: rolls.len(),
            windows_skipped: skipped,
            frequencies,
        })
    }
}

/// Conditional volatilities per trailing window. Windows whose previous
/// returns all sit on one side of their mean carry no conditional estimate
/// and are skipped (counted, not silently dropped).
fn rolling_conditional(r: &TimeSeries, window: usize) -> Result<(Vec<WindowStats>, usize)> {
    if r.len() < window {
        return Err(analysis_err(Error::TooShort {
            len: r.len(),
            min: window,
        }));
    }
    let mut out = Vec::new();
    let mut skipped = 0usize;
    for start in 0..=r.len() - window {
        let w = r.window(start, window);
        let sigma = volatility(&w).map_err(analysis_err)?;
        match conditional_volatility(&w) {
            Ok((sigma_plus, sigma_minus)) => out.push(WindowStats {
                end_index: start + window - 1,
                sigma_plus,
                sigma_minus,
                sigma,
            }),
            Err(Error::InsufficientConditionalSamples { .. }) => skipped += 1,
            Err(e) => return Err(analysis_err(e)),
        }
    }
    Ok((out, skipped))
}
