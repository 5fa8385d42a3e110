use std::sync::Arc;

use chrono::NaiveDate;

use crate::{Error, Result};

/// Minimum length accepted at the ingestion boundary. Shorter series cannot
/// support envelope construction or spectral masking.
pub const MIN_INGEST_LEN: usize = 8;

/// Calendar index of a series: either real observation dates carried through
/// from ingestion, or a synthetic daily grid for generated data.
///
/// Analysis treats consecutive observations as one time step regardless of
/// calendar gaps (weekends, holidays); dates are presentational.
#[derive(Debug, Clone, PartialEq)]
enum DateIndex {
    Synthetic { start: NaiveDate },
    Calendar { dates: Arc<Vec<NaiveDate>>, offset: usize },
}

/// A uniformly sampled, finite-valued univariate series.
///
/// Immutable after construction. Derived series (modes, filters, returns,
/// rolling statistics) share the parent's calendar index, shifted by the
/// number of leading observations they drop.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    label: String,
    values: Vec<f64>,
    index: DateIndex,
}

impl TimeSeries {
    /// Builds a series over a synthetic daily calendar starting 2000-01-01.
    ///
    /// Rejects non-finite values and empty input. Intended for generated
    /// signals; ingested data should go through [`validate_series`].
    pub fn from_values(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { len: 0, min: 1 });
        }
        check_finite(&values)?;
        Ok(Self {
            label: label.into(),
            values,
            index: DateIndex::Synthetic {
                start: NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(),
            },
        })
    }

    /// Builds a series from parallel date and value vectors that are already
    /// sorted, duplicate-free, and long enough. Used by [`validate_series`]
    /// and by readers of previously written output.
    pub fn from_parts(
        label: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::InvalidConfig {
                reason: format!("{} dates vs {} values", dates.len(), values.len()),
            });
        }
        if values.len() < MIN_INGEST_LEN {
            return Err(Error::TooShort {
                len: values.len(),
                min: MIN_INGEST_LEN,
            });
        }
        check_finite(&values)?;
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            let detail = if w[0] == w[1] {
                format!("duplicate timestamp {}", w[0])
            } else {
                format!("timestamps out of order at {}", w[1])
            };
            return Err(Error::NonUniformSampling {
                detail: Some(detail),
            });
        }
        Ok(Self {
            label: label.into(),
            values,
            index: DateIndex::Calendar {
                dates: Arc::new(dates),
                offset: 0,
            },
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Calendar date of observation `i`.
    pub fn date(&self, i: usize) -> NaiveDate {
        debug_assert!(i < self.values.len());
        match &self.index {
            DateIndex::Synthetic { start } => *start + chrono::Days::new(i as u64),
            DateIndex::Calendar { dates, offset } => dates[offset + i],
        }
    }

    pub fn start_date(&self) -> NaiveDate {
        self.date(0)
    }

    pub fn end_date(&self) -> NaiveDate {
        self.date(self.len() - 1)
    }

    /// Same calendar index, new values and label. Lengths must match.
    pub(crate) fn same_index(&self, label: impl Into<String>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self {
            label: label.into(),
            values,
            index: self.index.clone(),
        }
    }

    /// New values anchored `offset` observations into this series' calendar
    /// (e.g. first differences drop one leading observation, rolling windows
    /// drop `window - 1`).
    pub(crate) fn offset_index(
        &self,
        label: impl Into<String>,
        values: Vec<f64>,
        offset: usize,
    ) -> Self {
        assert!(offset + values.len() <= self.values.len());
        let index = match &self.index {
            DateIndex::Synthetic { start } => DateIndex::Synthetic {
                start: *start + chrono::Days::new(offset as u64),
            },
            DateIndex::Calendar { dates, offset: o } => DateIndex::Calendar {
                dates: Arc::clone(dates),
                offset: o + offset,
            },
        };
        Self {
            label: label.into(),
            values,
            index,
        }
    }

    /// Contiguous sub-series `[from, from + len)` keeping calendar alignment.
    pub fn window(&self, from: usize, len: usize) -> Self {
        let values = self.values[from..from + len].to_vec();
        self.offset_index(self.label.clone(), values, from)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFiniteValue { index }),
        None => Ok(()),
    }
}

/// Validates raw `(timestamp, value)` rows into a [`TimeSeries`].
///
/// Rows are sorted by timestamp; duplicate timestamps are rejected (zero
/// spacing is not uniform in any convention). Consecutive observations are
/// treated as one time step — calendar gaps carry no weight downstream.
pub fn validate_series(
    label: impl Into<String>,
    mut rows: Vec<(NaiveDate, f64)>,
) -> Result<TimeSeries> {
    rows.sort_by_key(|(d, _)| *d);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::NonUniformSampling {
            detail: Some(format!("duplicate timestamp {}", w[0].0)),
        });
    }
    let (dates, values): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    TimeSeries::from_parts(label, dates, values)
}

/// Elementwise natural logarithm, for converting prices to log prices.
///
/// Fails on any non-positive sample; the index and offending value are
/// reported so the bad row can be located in the source file.
pub fn log_transform(x: &TimeSeries) -> Result<TimeSeries> {
    if let Some((index, &value)) = x.values().iter().enumerate().find(|(_, v)| **v <= 0.0) {
        return Err(Error::NonPositivePrice { index, value });
    }
    let logged = x.values().iter().map(|v| v.ln()).collect();
    Ok(x.same_index(x.label().to_string(), logged))
}
