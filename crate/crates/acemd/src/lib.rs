//! Multiscale decomposition and Hilbert spectral analysis of nonstationary
//! time series.
//!
//! The crate decomposes a series into intrinsic mode functions (IMFs) by
//! empirical mode decomposition and its noise-assisted ensemble variants —
//! EEMD, complementary EEMD, and adaptive complementary EEMD, where the
//! injected noise is shaped by the envelope of the first pilot mode — then
//! builds scale filters, volatility statistics, and energy–frequency
//! summaries on top of the mode set.
//!
//! The decomposition pipeline is deterministic: every noise realization is
//! drawn from a per-trial substream of a seeded generator, and ensemble
//! reductions run in a fixed order, so results are bit-identical across
//! runs and thread counts.
//!
//! ```
//! use acemd::{EnsembleConfig, TimeSeries};
//!
//! let tau = std::f64::consts::TAU;
//! let x: Vec<f64> = (0..512)
//!     .map(|t| t as f64)
//!     .map(|t| 10.0 + (tau * t / 16.0).sin() + (tau * t / 128.0).sin())
//!     .collect();
//! let series = TimeSeries::from_values("demo", x).unwrap();
//!
//! let cfg = EnsembleConfig { ensemble_size: 10, ..EnsembleConfig::default() };
//! let (dec, diag) = acemd::ensemble::ace_emd(&series, &cfg).unwrap();
//! assert!(dec.num_imfs() >= 2);
//! assert!(dec.reconstruction_error() < 1e-8);
//! assert!(diag.orthogonality_index.abs() < 1.0);
//! ```

pub mod analysis;
mod config;
mod decomposition;
pub mod emd;
pub mod ensemble;
mod error;
mod series;
pub mod spectral;

/// Library version, for embedding in downstream provenance records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use analysis::{
    asymmetry_frequencies, conditional_volatility, high_pass, log_returns, low_pass,
    rolling_volatility, volatility, volatility_stats, FilterKind, FilteredSeries, VolatilityStats,
};
pub use config::{EnsembleConfig, SplineBoundary};
pub use decomposition::{Decomposition, Method};
pub use emd::{emd, emd_detailed};
pub use ensemble::{
    ace_emd, ceemd, eemd, select_sigma, DecompositionDiagnostics, SigmaSelection,
};
pub use error::{Error, Result};
pub use series::{log_transform, validate_series, TimeSeries, MIN_INGEST_LEN};
pub use spectral::{
    analytic_mode, frequency_deviation, hilbert_spectrum, hilbert_transform, rolling_spectrum,
    spectrum_summary, AnalyticMode, SpectrumPoint, SpectrumSummary,
};
