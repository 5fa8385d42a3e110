//! Timescale filtering and volatility statistics.
//!
//! A decomposition orders its modes from fastest to slowest, so partial sums
//! act as scale filters: [`high_pass`] keeps the `m` fastest modes,
//! [`low_pass`] removes them. The two are exact complements — for any split
//! `m_l + m_h = n + 1` (with `n` modes plus the residual counted as the
//! `n+1`-th component), `low_pass + high_pass` telescopes back to the source
//! series.
//!
//! On filtered log prices, the rest of the module computes first-difference
//! returns, unbiased sample volatility, and the up/down conditional
//! volatilities used to measure volatility asymmetry: windows where the
//! spread `sigma_up - sigma_down` clears a threshold `±eps·sigma` are counted
//! by [`asymmetry_frequencies`].

use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Which side of the timescale split a [`FilteredSeries`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    LowPass,
    HighPass,
}

/// A partial reconstruction of a decomposition, keeping either the slow or
/// the fast end of the mode stack.
#[derive(Debug, Clone)]
pub struct FilteredSeries {
    series: TimeSeries,
    kind: FilterKind,
    components_used: usize,
    components_total: usize,
}

impl FilteredSeries {
    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    pub fn values(&self) -> &[f64] {
        self.series.values()
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    /// The filter order `m`: how many components this side of the split keeps.
    pub fn components_used(&self) -> usize {
        self.components_used
    }

    /// Total component count of the source decomposition (modes + residual).
    pub fn components_total(&self) -> usize {
        self.components_total
    }

    /// First differences of the filtered values; see [`log_returns`].
    pub fn log_returns(&self) -> Result<TimeSeries> {
        log_returns(&self.series)
    }
}

fn check_order(m: usize, total: usize) -> Result<()> {
    if m < 1 || m > total {
        return Err(Error::IndexOutOfRange { m, max: total });
    }
    Ok(())
}

/// Removes the `n - m_l + 1` fastest modes from the source, keeping the slow
/// trend side of the decomposition.
///
/// `m_l = 1` keeps only the residual; `m_l = n + 1` removes nothing and
/// returns the source itself.
pub fn low_pass(d: &Decomposition, m_l: usize) -> Result<FilteredSeries> {
    let total = d.num_imfs() + 1;
    check_order(m_l, total)?;
    let drop = total - m_l; // number of fast modes subtracted
    let mut values = d.source().values().to_vec();
    for imf in d.imfs().iter().take(drop) {
        for (v, c) in values.iter_mut().zip(imf.values()) {
            *v -= c;
        }
    }
    let label = format!("{}_low_{m_l}", d.source().label());
    Ok(FilteredSeries {
        series: d.source().same_index(label, values),
        kind: FilterKind::LowPass,
        components_used: m_l,
        components_total: total,
    })
}

/// Sums the `m_h` fastest modes, keeping the local high-frequency side of
/// the decomposition.
///
/// `m_h = n + 1` includes the residual and returns the source itself.
pub fn high_pass(d: &Decomposition, m_h: usize) -> Result<FilteredSeries> {
    let total = d.num_imfs() + 1;
    check_order(m_h, total)?;
    let mut values = vec![0.0; d.source().len()];
    for comp in d.components().take(m_h) {
        for (v, c) in values.iter_mut().zip(comp.values()) {
            *v += c;
        }
    }
    let label = format!("{}_high_{m_h}", d.source().label());
    Ok(FilteredSeries {
        series: d.source().same_index(label, values),
        kind: FilterKind::HighPass,
        components_used: m_h,
        components_total: total,
    })
}

/// First differences `r(t) = x(t) - x(t-1)`, dropping the first observation.
///
/// On log prices these are log returns; the name reflects that primary use.
pub fn log_returns(x: &TimeSeries) -> Result<TimeSeries> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            len: x.len(),
            min: 2,
        });
    }
    let v = x.values();
    let diffs: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(x.offset_index(format!("{}_ret", x.label()), diffs, 1))
}

fn sample_mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased sample standard deviation (`T - 1` denominator) about the mean.
fn sample_std(v: &[f64]) -> f64 {
    let mean = sample_mean(v);
    let ss: f64 = v.iter().map(|r| (r - mean).powi(2)).sum();
    (ss / (v.len() - 1) as f64).sqrt()
}

/// Sample volatility of a return series (unbiased, `T - 1` denominator).
pub fn volatility(r: &TimeSeries) -> Result<f64> {
    if r.len() < 2 {
        return Err(Error::TooShort {
            len: r.len(),
            min: 2,
        });
    }
    Ok(sample_std(r.values()))
}

/// Trailing-window [`volatility`], indexed at each window's last observation.
///
/// Output length is `T - window + 1`.
pub fn rolling_volatility(r: &TimeSeries, window: usize) -> Result<TimeSeries> {
    if window < 2 {
        return Err(Error::InvalidConfig {
            reason: format!("rolling window must cover at least 2 observations, got {window}"),
        });
    }
    if r.len() < window {
        return Err(Error::TooShort {
            len: r.len(),
            min: window,
        });
    }
    let v = r.values();
    let out: Vec<f64> = v.windows(window).map(sample_std).collect();
    Ok(r.offset_index(format!("{}_vol{window}", r.label()), out, window - 1))
}

/// Volatilities of `r(t)` conditioned on the sign of the previous return
/// relative to the sample mean: `(sigma_up, sigma_down)` for
/// `r(t-1) > mu` and `r(t-1) < mu` respectively.
///
/// Observations with `r(t-1)` exactly at the mean belong to neither side.
/// Each side needs at least two samples for its unbiased deviation.
pub fn conditional_volatility(r: &TimeSeries) -> Result<(f64, f64)> {
    let v = r.values();
    if v.len() < 3 {
        return Err(Error::TooShort {
            len: v.len(),
            min: 3,
        });
    }
    let mu = sample_mean(v);
    let mut up = Vec::new();
    let mut down = Vec::new();
    for t in 1..v.len() {
        if v[t - 1] > mu {
            up.push(v[t]);
        } else if v[t - 1] < mu {
            down.push(v[t]);
        }
    }
    if up.len() < 2 || down.len() < 2 {
        return Err(Error::InsufficientConditionalSamples {
            up: up.len(),
            down: down.len(),
        });
    }
    Ok((sample_std(&up), sample_std(&down)))
}

/// Full-sample summary of a return series: mean, volatility, and the two
/// conditional volatilities.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VolatilityStats {
    pub mean: f64,
    pub volatility: f64,
    pub cond_up: f64,
    pub cond_down: f64,
}

pub fn volatility_stats(r: &TimeSeries) -> Result<VolatilityStats> {
    let (cond_up, cond_down) = conditional_volatility(r)?;
    Ok(VolatilityStats {
        mean: sample_mean(r.values()),
        volatility: volatility(r)?,
        cond_up,
        cond_down,
    })
}

/// Fraction of rolling windows whose conditional-volatility spread clears the
/// threshold on each side.
///
/// Each element of `rolls` is one window's `(sigma_up, sigma_down, sigma)`.
/// Returns `(p_plus, p_minus)`: the fractions of windows with
/// `sigma_up - sigma_down > eps * sigma` and `< -eps * sigma`. The two events
/// are disjoint, so `p_plus + p_minus <= 1`.
pub fn asymmetry_frequencies(rolls: &[(f64, f64, f64)], eps: f64) -> Result<(f64, f64)> {
    if rolls.is_empty() {
        return Err(Error::EmptyInput {
            what: "rolling conditional-volatility windows",
        });
    }
    if eps <= 0.0 || eps.is_nan() {
        return Err(Error::NonPositiveEpsilon { value: eps });
    }
    let mut plus = 0usize;
    let mut minus = 0usize;
    for &(up, down, sigma) in rolls {
        let spread = up - down;
        if spread > eps * sigma {
            plus += 1;
        } else if spread < -eps * sigma {
            minus += 1;
        }
    }
    let n = rolls.len() as f64;
    Ok((plus as f64 / n, minus as f64 / n))
}
