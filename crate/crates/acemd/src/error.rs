use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by validation, decomposition, filtering, and spectral
/// analysis.
///
/// Variants are grouped by the stage that raises them; the CLI maps each
/// group to a distinct exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // -- series validation ---------------------------------------------------
    /// Timestamps are not equally spaced in observation time (duplicates
    /// included: a repeated timestamp has zero spacing).
    #[error("timestamps not uniformly spaced{}", detail_or_empty(.detail))]
    NonUniformSampling { detail: Option<String> },

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("series too short: {len} observations, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("non-positive price {value} at index {index}: log transform undefined")]
    NonPositivePrice { index: usize, value: f64 },

    // -- configuration -------------------------------------------------------
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    // -- decomposition -------------------------------------------------------
    /// Sifting needs at least two maxima and two minima to build envelopes.
    #[error("insufficient extrema: {num_maxima} maxima, {num_minima} minima (need 2 of each)")]
    InsufficientExtrema { num_maxima: usize, num_minima: usize },

    /// The orthogonality index is undefined when every sample of the source
    /// is (numerically) zero.
    #[error("degenerate series: all samples below the magnitude floor")]
    DegenerateSeries,

    /// Pairwise diagnostics need at least two components.
    #[error("too few modes: have {have}, need at least {need}")]
    TooFewModes { have: usize, need: usize },

    // -- filtering and volatility --------------------------------------------
    #[error("component count {m} out of range [1, {max}]")]
    IndexOutOfRange { m: usize, max: usize },

    /// Conditional volatility needs at least two returns on each side of the
    /// window mean.
    #[error("insufficient conditional samples: {up} above-mean, {down} below-mean predecessors")]
    InsufficientConditionalSamples { up: usize, down: usize },

    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    #[error("threshold epsilon must be positive, got {value}")]
    NonPositiveEpsilon { value: f64 },

    // -- spectral --------------------------------------------------------------
    #[error("decomposition has no oscillatory modes")]
    NoModes,

    /// Central-tendency summaries need a minimum number of mask-valid samples.
    #[error("insufficient valid samples: {have} (need {need})")]
    InsufficientValidSamples { have: usize, need: usize },

    /// The power-law fit is undefined when all central frequencies coincide.
    #[error("degenerate fit: no variance in log central frequency")]
    DegenerateFit,

    #[error("mode count mismatch: {left} vs {right}")]
    ModeCountMismatch { left: usize, right: usize },
}

fn detail_or_empty(detail: &Option<String>) -> String {
    match detail {
        Some(d) => format!(": {d}"),
        None => String::new(),
    }
}
