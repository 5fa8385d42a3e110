//! `spectrum`: sparse Hilbert spectrum, per-mode central points, exponent fit.

use std::path::PathBuf;

use acemd::spectral::central_frequency_energy;
use acemd::{analytic_mode, hilbert_spectrum, spectrum_summary, Error};
use clap::Args;

use crate::error::{analysis_err, Result};
use crate::ingest::IngestArgs;
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, fmt, write_csv, write_json};
use crate::pipeline::PipelineArgs;
use crate::plot::spectrum_svg;

#[derive(Debug, Args)]
pub struct SpectrumCmd {
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Also render an SVG scatter of the energy–frequency cloud.
    #[arg(long)]
    pub plot: bool,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

impl SpectrumCmd {
    pub fn run(&self, argv: &[String]) -> Result<()> {
        let x = self.ingest.load()?;
        let outcome = self.pipeline.run(&x)?;
        let d = &outcome.decomposition;

        let points = hilbert_spectrum(d).map_err(analysis_err)?;
        let summary = spectrum_summary(d).map_err(analysis_err)?;

        ensure_dir(&self.out_dir)?;
        write_csv(
            &self.out_dir.join("spectrum.csv"),
            &["date", "time", "mode", "frequency", "energy"],
            points.iter().map(|p| {
                vec![
                    x.date(p.time).to_string(),
                    p.time.to_string(),
                    p.mode.to_string(),
                    fmt(p.frequency),
                    fmt(p.energy),
                ]
            }),
        )?;

        // Per-mode central points, with the low-energy exclusion counts the
        // summary's geometric means applied.
        let mut central_rows = Vec::new();
        for (j, imf) in d.imfs().iter().enumerate() {
            match analytic_mode(imf).and_then(|m| central_frequency_energy(&m)) {
                Ok(c) => central_rows.push(vec![
                    (j + 1).to_string(),
                    fmt(c.frequency),
                    fmt(c.energy),
                    c.excluded_low_energy.to_string(),
                ]),
                Err(Error::InsufficientValidSamples { have, need }) => {
                    eprintln!(
                        "mode {} skipped: {have} valid samples, need {need}",
                        j + 1
                    );
                }
                Err(e) => return Err(analysis_err(e)),
            }
        }
        write_csv(
            &self.out_dir.join("central_frequencies.csv"),
            &["mode", "central_frequency", "central_energy", "excluded_low_energy"],
            central_rows,
        )?;
        write_json(&self.out_dir.join("alpha.json"), &summary)?;

        if self.plot {
            std::fs::write(
                self.out_dir.join("spectrum.svg"),
                spectrum_svg(&points, &summary),
            )?;
        }

        RunManifest::new(
            argv,
            self.pipeline.seed,
            vec![digest_file(&self.ingest.input)?],
            serde_json::json!({
                "subcommand": "spectrum",
                "column": self.ingest.column,
                "date_column": self.ingest.date_column,
                "log": self.ingest.use_log(),
                "plot": self.plot,
                "out_dir": self.out_dir,
                "pipeline": self.pipeline.config_echo(&{
                    let mut cfg = self.pipeline.config();
                    cfg.noise_sigma = outcome.diagnostics.sigma_used;
                    cfg
                }),
            }),
        )
        .write(&self.out_dir)?;

        eprintln!(
            "spectrum over {} modes: alpha = {:.4}, R^2 = {:.4}",
            summary.modes_used, summary.alpha, summary.r_squared
        );
        Ok(())
    }
}
