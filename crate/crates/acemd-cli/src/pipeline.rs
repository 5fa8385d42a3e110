//! Shared decomposition driver: method/noise flags and the run itself.

use acemd::emd::{count_zero_crossings, emd_detailed, find_extrema, SiftReport};
use acemd::ensemble::{DEFAULT_OI_THRESHOLD, DEFAULT_SIGMA_GRID};
use acemd::{
    ace_emd, ceemd, eemd, ensemble, select_sigma, Decomposition, DecompositionDiagnostics,
    EnsembleConfig, Error, SigmaSelection, TimeSeries,
};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::{decompose_err, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Plain sifting, no noise ensemble.
    Emd,
    /// Ensemble averaging over independent noise realizations.
    Eemd,
    /// Ensemble averaging over complementary (sign-paired) noise.
    Ceemd,
    /// Complementary ensemble with envelope-adaptive noise amplitude.
    Ace,
}

/// Decomposition flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Decomposition method.
    #[arg(long, value_enum, default_value_t = MethodArg::Ace)]
    pub method: MethodArg,
    /// Cap on the number of extracted modes.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Noise realizations per ensemble (sign pairs count as two).
    #[arg(long = "ensemble-size", default_value_t = 100)]
    pub ensemble_size: usize,
    /// Relative noise amplitude (default 0.2). Zero collapses any ensemble
    /// method to plain sifting.
    #[arg(long, conflicts_with = "auto_sigma")]
    pub sigma: Option<f64>,
    /// Search a noise-amplitude grid and keep the best orthogonality /
    /// separability trade-off (ace method only).
    #[arg(long = "auto-sigma")]
    pub auto_sigma: bool,
    /// RNG seed; every noise realization derives from it deterministically.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Structural check of one output mode: a clean mode's extrema and zero
/// crossings differ by at most one.
#[derive(Debug, Serialize)]
pub struct ModeCheck {
    pub mode: String,
    pub num_extrema: usize,
    pub num_zero_crossings: usize,
    pub count_condition_ok: bool,
}

pub struct PipelineOutcome {
    pub decomposition: Decomposition,
    pub diagnostics: DecompositionDiagnostics,
    pub sigma_selection: Option<SigmaSelection>,
    /// Per-mode sifting trajectory of the noise-free run that also fixes the
    /// mode count ensembles align to.
    pub sift_reports: Vec<SiftReport>,
    /// Set when an adaptive run fell back to plain sifting because the input
    /// had no oscillations for the pilot mode to track.
    pub fell_back_to_emd: bool,
}

impl PipelineOutcome {
    pub fn mode_checks(&self) -> Vec<ModeCheck> {
        self.decomposition
            .imfs()
            .iter()
            .map(|imf| {
                let ext = find_extrema(imf).total();
                let zc = count_zero_crossings(imf.values());
                ModeCheck {
                    mode: imf.label().to_string(),
                    num_extrema: ext,
                    num_zero_crossings: zc,
                    count_condition_ok: ext.abs_diff(zc) <= 1,
                }
            })
            .collect()
    }

    /// Diagnostics document written next to the data files.
    pub fn diagnostics_json(&self) -> serde_json::Value {
        serde_json::json!({
            "method": self.decomposition.method(),
            "modes": self.decomposition.num_imfs(),
            "reconstruction_error": self.decomposition.reconstruction_error(),
            "orthogonality_index": self.diagnostics.orthogonality_index,
            "separability": self.diagnostics.separability,
            "sigma_used": self.diagnostics.sigma_used,
            "ensemble_size_used": self.diagnostics.ensemble_size_used,
            "mode_checks": self.mode_checks(),
            "sift_reports": self.sift_reports,
            "sigma_search": self.sigma_selection,
            "fell_back_to_emd": self.fell_back_to_emd,
        })
    }
}

impl PipelineArgs {
    pub fn config(&self) -> EnsembleConfig {
        EnsembleConfig {
            ensemble_size: self.ensemble_size,
            noise_sigma: self.sigma.unwrap_or(0.2),
            seed: self.seed,
            max_modes: self.modes,
            ..EnsembleConfig::default()
        }
    }

    /// Echo of the effective decomposition settings for the manifest.
    pub fn config_echo(&self, cfg: &EnsembleConfig) -> serde_json::Value {
        serde_json::json!({
            "method": format!("{:?}", self.method).to_lowercase(),
            "auto_sigma": self.auto_sigma,
            "ensemble": cfg,
        })
    }

    pub fn run(&self, x: &TimeSeries) -> Result<PipelineOutcome> {
        let mut cfg = self.config();

        let sigma_selection = if self.auto_sigma {
            if self.method != MethodArg::Ace {
                return Err(CliError::Usage(
                    "--auto-sigma searches adaptive-noise decompositions; \
                     it requires --method ace"
                        .into(),
                ));
            }
            let sel = select_sigma(x, &DEFAULT_SIGMA_GRID, DEFAULT_OI_THRESHOLD, &cfg)
                .map_err(decompose_err)?;
            eprintln!(
                "auto sigma: selected {}{}",
                sel.sigma,
                if sel.constraint_unmet {
                    " (no grid point met the orthogonality threshold; \
                     this is the least-leaky one)"
                } else {
                    ""
                }
            );
            cfg.noise_sigma = sel.sigma;
            Some(sel)
        } else {
            None
        };

        let mut fell_back_to_emd = false;
        let (decomposition, diagnostics) = match self.method {
            MethodArg::Emd => plain_emd(x, &cfg)?,
            MethodArg::Eemd => eemd(x, &cfg).map_err(decompose_err)?,
            MethodArg::Ceemd => ceemd(x, &cfg).map_err(decompose_err)?,
            MethodArg::Ace => match ace_emd(x, &cfg) {
                Ok(pair) => pair,
                Err(Error::InsufficientExtrema { .. }) => {
                    eprintln!(
                        "input has no oscillations for the adaptive noise pilot; \
                         falling back to plain sifting"
                    );
                    fell_back_to_emd = true;
                    plain_emd(x, &cfg)?
                }
                Err(e) => return Err(decompose_err(e)),
            },
        };

        // The noise-free sift of the raw input doubles as a per-mode report:
        // for plain runs it is the run itself, for ensembles it is the
        // alignment decomposition the trial modes are matched against.
        let sift_reports = emd_detailed(x, &cfg)
            .map(|(_, reports)| reports)
            .unwrap_or_default();

        Ok(PipelineOutcome {
            decomposition,
            diagnostics,
            sigma_selection,
            sift_reports,
            fell_back_to_emd,
        })
    }
}

/// Plain sifting plus the same diagnostics the ensemble paths report.
fn plain_emd(
    x: &TimeSeries,
    cfg: &EnsembleConfig,
) -> Result<(Decomposition, DecompositionDiagnostics)> {
    let (d, _) = emd_detailed(x, cfg).map_err(decompose_err)?;
    let orthogonality_index = ensemble::orthogonality_index(&d).map_err(decompose_err)?;
    let separability = if d.num_imfs() == 0 {
        0.0
    } else {
        ensemble::separability(&d).map_err(decompose_err)?
    };
    Ok((
        d,
        DecompositionDiagnostics {
            orthogonality_index,
            separability,
            sigma_used: 0.0,
            ensemble_size_used: 1,
        },
    ))
}
