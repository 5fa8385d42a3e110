use serde::Serialize;

use crate::{Error, Result};

/// How spline envelopes are anchored beyond the first and last interior
/// extrema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplineBoundary {
    /// Reflect the two outermost extrema on each side across the end sample's
    /// position (values kept). The default; keeps end oscillations free.
    Mirror,
    /// Pin the envelope to the series' end samples.
    Clamp,
}

/// Knobs shared by every decomposition method.
///
/// `noise_sigma` is dimensionless: ensemble methods scale it by the series'
/// standard deviation (EEMD/CEEMD) or by the pilot-mode envelope (adaptive
/// variant) to obtain the injected noise level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    /// Number of noise realizations N. Complementary methods run 2N trials.
    pub ensemble_size: usize,
    /// Relative noise amplitude σ ≥ 0. Zero collapses every ensemble method
    /// to plain EMD.
    pub noise_sigma: f64,
    /// Root seed for all noise substreams.
    pub seed: u64,
    /// Fixed mode count; `None` lets the zero-noise decomposition decide.
    pub max_modes: Option<usize>,
    /// Cap on sifting iterations per mode.
    pub sift_max_iters: usize,
    /// Cauchy-type stopping threshold on successive sift iterates.
    pub sift_sd_tol: f64,
    pub spline_boundary: SplineBoundary,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 100,
            noise_sigma: 0.2,
            seed: 42,
            max_modes: None,
            sift_max_iters: 50,
            sift_sd_tol: 0.2,
            spline_boundary: SplineBoundary::Mirror,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(invalid("ensemble_size must be at least 1"));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(invalid("noise_sigma must be finite and non-negative"));
        }
        if self.max_modes == Some(0) {
            return Err(invalid("max_modes must be at least 1 when set"));
        }
        if self.sift_max_iters == 0 {
            return Err(invalid("sift_max_iters must be at least 1"));
        }
        if !self.sift_sd_tol.is_finite() || self.sift_sd_tol <= 0.0 {
            return Err(invalid("sift_sd_tol must be finite and positive"));
        }
        Ok(())
    }
}

fn invalid(reason: &str) -> Error {
    Error::InvalidConfig {
        reason: reason.to_string(),
    }
}
