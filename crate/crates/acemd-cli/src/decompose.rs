//! `decompose`: modes + residual to CSV, quality diagnostics to JSON.

use std::path::PathBuf;

use clap::Args;

use crate::error::Result;
use crate::ingest::IngestArgs;
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, fmt, write_csv, write_json};
use crate::pipeline::PipelineArgs;

#[derive(Debug, Args)]
pub struct DecomposeCmd {
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

impl DecomposeCmd {
    pub fn run(&self, argv: &[String]) -> Result<()> {
        let x = self.ingest.load()?;
        let outcome = self.pipeline.run(&x)?;
        let d = &outcome.decomposition;

        ensure_dir(&self.out_dir)?;

        let mut header: Vec<String> = vec!["date".into(), "x".into()];
        header.extend(d.imfs().iter().map(|c| c.label().to_string()));
        header.push("residual".into());
        let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
        let rows = (0..x.len()).map(|t| {
            let mut row = Vec::with_capacity(header_refs.len());
            row.push(x.date(t).to_string());
            row.push(fmt(x.values()[t]));
            for c in d.imfs() {
                row.push(fmt(c.values()[t]));
            }
            row.push(fmt(d.residual().values()[t]));
            row
        });
        write_csv(&self.out_dir.join("imfs.csv"), &header_refs, rows)?;
        write_json(
            &self.out_dir.join("diagnostics.json"),
            &outcome.diagnostics_json(),
        )?;

        let cfg = {
            let mut cfg = self.pipeline.config();
            cfg.noise_sigma = outcome.diagnostics.sigma_used;
            cfg
        };
        RunManifest::new(
            argv,
            self.pipeline.seed,
            vec![digest_file(&self.ingest.input)?],
            serde_json::json!({
                "subcommand": "decompose",
                "column": self.ingest.column,
                "date_column": self.ingest.date_column,
                "log": self.ingest.use_log(),
                "out_dir": self.out_dir,
                "pipeline": self.pipeline.config_echo(&cfg),
            }),
        )
        .write(&self.out_dir)?;

        eprintln!(
            "decomposed '{}' ({} observations) into {} modes + residual \
             [method {}, orthogonality index {:.4e}, separability {:.4}]",
            x.label(),
            x.len(),
            d.num_imfs(),
            d.method(),
            outcome.diagnostics.orthogonality_index,
            outcome.diagnostics.separability,
        );
        eprintln!("wrote {}", self.out_dir.join("imfs.csv").display());
        Ok(())
    }
}
