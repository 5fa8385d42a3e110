//! Hilbert spectral analysis of decomposed series.
//!
//! Each oscillatory mode becomes an analytic signal whose modulus and phase
//! give instantaneous amplitude, frequency (cycles per observation), and
//! energy. Per-mode geometric means of frequency and energy condense a
//! decomposition into one point per mode on the energy–frequency plane; the
//! slope of the least-squares line through those points in log–log
//! coordinates estimates the power-spectrum exponent `alpha` in
//! `E(f) ~ 1/f^alpha`.
//!
//! Instantaneous frequency is computed by finite-differencing the unwrapped
//! phase rather than differentiating the arctangent in closed form: the two
//! agree analytically, but differencing stays stable where the amplitude
//! nearly vanishes. Edge samples and samples with nonpositive frequency
//! (artifacts of imperfect modes) are masked out of every aggregate rather
//! than clipped, and the exclusions are reported.

mod hilbert;

pub use hilbert::hilbert_transform;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::EnsembleConfig;
use crate::decomposition::Decomposition;
use crate::ensemble::{ace_emd, derive_seed};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Samples trimmed from each end of a mode before any aggregate: the phase
/// differencing is one-sided there and the transform itself leaks at edges.
const EDGE_GUARD: usize = 2;

/// Minimum masked-in samples for central-tendency estimates.
const MIN_VALID_SAMPLES: usize = 8;

/// Relative energy floor below which samples are excluded from the central
/// energy's log mean.
const ENERGY_FLOOR_REL: f64 = 1e-12;

/// Minimum mode points for the power-exponent regression.
const MIN_FIT_POINTS: usize = 3;

/// Instantaneous description of one oscillatory mode.
#[derive(Debug, Clone)]
pub struct AnalyticMode {
    amplitude: Vec<f64>,
    phase: Vec<f64>,
    frequency: Vec<f64>,
    energy: Vec<f64>,
    validity: Vec<bool>,
}

impl AnalyticMode {
    /// Instantaneous amplitude `a(t) = |x(t) + i H[x](t)|`.
    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    /// Unwrapped phase in radians; consecutive jumps never exceed pi.
    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// Instantaneous frequency in cycles per observation.
    pub fn frequency(&self) -> &[f64] {
        &self.frequency
    }

    /// Instantaneous energy `E(t) = a(t)^2`.
    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    /// Which samples participate in aggregates: interior samples with
    /// strictly positive frequency.
    pub fn validity(&self) -> &[bool] {
        &self.validity
    }

    pub fn num_valid(&self) -> usize {
        self.validity.iter().filter(|v| **v).count()
    }
}

/// Shifts each phase increment into `[-pi, pi)` and accumulates.
fn unwrap_phase(raw: &[f64]) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    out.push(raw[0]);
    for t in 1..raw.len() {
        let jump = raw[t] - raw[t - 1];
        offset -= tau * ((jump + std::f64::consts::PI) / tau).floor();
        out.push(raw[t] + offset);
    }
    out
}

/// Analytic-signal view of a single mode: amplitude, unwrapped phase,
/// finite-difference instantaneous frequency, energy, and the validity mask.
pub fn analytic_mode(c: &TimeSeries) -> Result<AnalyticMode> {
    let z = hilbert::analytic_signal(c.values())?;
    let n = z.len();
    let amplitude: Vec<f64> = z.iter().map(|v| v.norm()).collect();
    let raw_phase: Vec<f64> = z.iter().map(|v| v.im.atan2(v.re)).collect();
    let phase = unwrap_phase(&raw_phase);

    let tau = std::f64::consts::TAU;
    let mut frequency = vec![0.0; n];
    frequency[0] = (phase[1] - phase[0]) / tau;
    frequency[n - 1] = (phase[n - 1] - phase[n - 2]) / tau;
    for t in 1..n - 1 {
        frequency[t] = (phase[t + 1] - phase[t - 1]) / (2.0 * tau);
    }

    let energy: Vec<f64> = amplitude.iter().map(|a| a * a).collect();
    let validity: Vec<bool> = (0..n)
        .map(|t| t >= EDGE_GUARD && t < n - EDGE_GUARD && frequency[t] > 0.0)
        .collect();
    Ok(AnalyticMode {
        amplitude,
        phase,
        frequency,
        energy,
        validity,
    })
}

/// One masked-in sample of one mode on the time–frequency plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumPoint {
    /// Observation index into the source series.
    pub time: usize,
    /// Mode number, 1-based, fastest first.
    pub mode: usize,
    /// Instantaneous frequency in cycles per observation.
    pub frequency: f64,
    /// Instantaneous energy (squared amplitude).
    pub energy: f64,
}

/// Sparse Hilbert spectrum: every valid `(t, f, E)` sample of every mode.
///
/// The residual is excluded — it carries no oscillation to attribute a
/// frequency to.
pub fn hilbert_spectrum(d: &Decomposition) -> Result<Vec<SpectrumPoint>> {
    if d.num_imfs() == 0 {
        return Err(Error::NoModes);
    }
    let mut points = Vec::new();
    for (j, imf) in d.imfs().iter().enumerate() {
        let m = analytic_mode(imf)?;
        for t in 0..imf.len() {
            if m.validity[t] {
                points.push(SpectrumPoint {
                    time: t,
                    mode: j + 1,
                    frequency: m.frequency[t],
                    energy: m.energy[t],
                });
            }
        }
    }
    Ok(points)
}

/// Geometric-mean frequency and energy of one mode, with the count of
/// samples excluded from the energy mean by the low-energy floor.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CentralMeasures {
    pub frequency: f64,
    pub energy: f64,
    /// Valid samples whose energy fell below `1e-12 * max E` and were left
    /// out of the energy mean to keep the log finite.
    pub excluded_low_energy: usize,
}

/// Central frequency and energy of a mode: geometric means over the
/// masked-in samples.
pub fn central_frequency_energy(m: &AnalyticMode) -> Result<CentralMeasures> {
    let valid: Vec<usize> = (0..m.validity.len()).filter(|t| m.validity[*t]).collect();
    if valid.len() < MIN_VALID_SAMPLES {
        return Err(Error::InsufficientValidSamples {
            have: valid.len(),
            need: MIN_VALID_SAMPLES,
        });
    }
    let log_f_mean =
        valid.iter().map(|t| m.frequency[*t].ln()).sum::<f64>() / valid.len() as f64;

    let max_energy = valid.iter().map(|t| m.energy[*t]).fold(0.0f64, f64::max);
    let floor = ENERGY_FLOOR_REL * max_energy;
    let kept: Vec<f64> = valid
        .iter()
        .map(|t| m.energy[*t])
        .filter(|e| *e >= floor)
        .collect();
    let excluded_low_energy = valid.len() - kept.len();
    let log_e_mean = kept.iter().map(|e| e.ln()).sum::<f64>() / kept.len() as f64;

    Ok(CentralMeasures {
        frequency: log_f_mean.exp(),
        energy: log_e_mean.exp(),
        excluded_low_energy,
    })
}

/// Per-mode central points plus the fitted power-spectrum exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSummary {
    /// Central frequency per fitted mode, fastest first, cycles/observation.
    pub central_frequencies: Vec<f64>,
    /// Central energy per fitted mode, same order.
    pub central_energies: Vec<f64>,
    /// Exponent in `E(f) ~ 1/f^alpha`: negative slope of the log–log fit.
    pub alpha: f64,
    /// Coefficient of determination of that fit.
    pub r_squared: f64,
    /// Modes that had enough valid samples to contribute a central point.
    pub modes_used: usize,
}

/// Ordinary least squares of `log E` on `log f`; returns `(alpha, r_squared)`
/// where `alpha` is the negative fitted slope.
pub fn power_exponent(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewModes {
            have: points.len(),
            need: MIN_FIT_POINTS,
        });
    }
    if points.iter().any(|(f, e)| *f <= 0.0 || *e <= 0.0) {
        return Err(Error::DegenerateFit);
    }
    let xs: Vec<f64> = points.iter().map(|(f, _)| f.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx).powi(2);
        sxy += (x - mx) * (y - my);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    // All-equal energies fit exactly with slope zero; define R^2 = 1 there.
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((-slope, r_squared))
}

/// Condenses a decomposition to its energy–frequency summary.
///
/// Modes without enough valid samples for stable geometric means (typically
/// the slowest, whose few oscillations the edge guard eats) are skipped;
/// `modes_used` records how many contributed.
pub fn spectrum_summary(d: &Decomposition) -> Result<SpectrumSummary> {
    if d.num_imfs() == 0 {
        return Err(Error::NoModes);
    }
    let mut central_frequencies = Vec::new();
    let mut central_energies = Vec::new();
    for imf in d.imfs() {
        match analytic_mode(imf).and_then(|m| central_frequency_energy(&m)) {
            Ok(c) => {
                central_frequencies.push(c.frequency);
                central_energies.push(c.energy);
            }
            Err(Error::InsufficientValidSamples { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let points: Vec<(f64, f64)> = central_frequencies
        .iter()
        .copied()
        .zip(central_energies.iter().copied())
        .collect();
    let (alpha, r_squared) = power_exponent(&points)?;
    Ok(SpectrumSummary {
        modes_used: points.len(),
        central_frequencies,
        central_energies,
        alpha,
        r_squared,
    })
}

/// Squared log-distance between two summaries' central frequencies:
/// `D = sum_j (log f_j^(1) - log f_j^(2))^2`. Zero iff the mode frequencies
/// coincide exactly; symmetric in its arguments.
pub fn frequency_deviation(s1: &SpectrumSummary, s2: &SpectrumSummary) -> Result<f64> {
    if s1.central_frequencies.len() != s2.central_frequencies.len() {
        return Err(Error::ModeCountMismatch {
            left: s1.central_frequencies.len(),
            right: s2.central_frequencies.len(),
        });
    }
    Ok(s1
        .central_frequencies
        .iter()
        .zip(&s2.central_frequencies)
        .map(|(a, b)| {
            if a == b {
                0.0
            } else {
                (a.ln() - b.ln()).powi(2)
            }
        })
        .sum())
}

/// Minimum rolling-spectrum window: shorter windows don't carry enough modes
/// for the exponent fit to mean anything.
pub const MIN_SPECTRUM_WINDOW: usize = 256;

/// Trailing-window spectrum summaries: each window is decomposed afresh with
/// adaptive ensemble noise and summarized, tagged with the window's last
/// observation date.
///
/// Window `i` uses a seed derived from `(cfg.seed, i)`, so results are
/// independent of evaluation order and thread count, and any window can be
/// recomputed in isolation.
pub fn rolling_spectrum(
    x: &TimeSeries,
    window: usize,
    step: usize,
    cfg: &EnsembleConfig,
) -> Result<Vec<(NaiveDate, SpectrumSummary)>> {
    if window < MIN_SPECTRUM_WINDOW {
        return Err(Error::InvalidConfig {
            reason: format!(
                "spectrum window must cover at least {MIN_SPECTRUM_WINDOW} observations, got {window}"
            ),
        });
    }
    if step < 1 {
        return Err(Error::InvalidConfig {
            reason: "rolling step must be at least 1".into(),
        });
    }
    if x.len() < window {
        return Err(Error::TooShort {
            len: x.len(),
            min: window,
        });
    }
    let starts: Vec<usize> = (0..=x.len() - window).step_by(step).collect();
    starts
        .par_iter()
        .enumerate()
        .map(|(window_index, start)| {
            let mut window_cfg = cfg.clone();
            window_cfg.seed = derive_seed(cfg.seed, window_index as u64);
            let w = x.window(*start, window);
            let (d, _) = ace_emd(&w, &window_cfg)?;
            Ok((w.end_date(), spectrum_summary(&d)?))
        })
        .collect()
}
