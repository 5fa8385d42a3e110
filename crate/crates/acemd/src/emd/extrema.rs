//! Interior extrema and zero-crossing detection for sifting.

use crate::TimeSeries;

/// Interior local maxima and minima of a series, as `(index, value)` pairs
/// with strictly increasing indices.
///
/// Maxima and minima interleave: between two consecutive maxima lies at
/// least one minimum, and vice versa. End samples are never extrema.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaSet {
    pub maxima: Vec<(usize, f64)>,
    pub minima: Vec<(usize, f64)>,
}

impl ExtremaSet {
    pub fn num_maxima(&self) -> usize {
        self.maxima.len()
    }

    pub fn num_minima(&self) -> usize {
        self.minima.len()
    }

    pub fn total(&self) -> usize {
        self.maxima.len() + self.minima.len()
    }

    /// Enough structure to hang upper and lower envelopes on.
    pub fn supports_sifting(&self) -> bool {
        self.maxima.len() >= 2 && self.minima.len() >= 2
    }
}

/// Locates interior local extrema.
///
/// A run of equal values (plateau) bounded by a rise on one side and a fall
/// on the other contributes a single extremum at the plateau midpoint
/// (rounded down). Plateaus touching either end of the series are not
/// interior and contribute nothing.
pub fn find_extrema(x: &TimeSeries) -> ExtremaSet {
    find_extrema_values(x.values())
}

pub(crate) fn find_extrema_values(v: &[f64]) -> ExtremaSet {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let n = v.len();
    if n >= 3 {
        // Direction of the last strict move; 0 until the first one.
        let mut prev_dir = 0i8;
        // Start of the plateau (run of equal values) currently underway.
        let mut run_start = 0usize;
        for t in 1..n {
            if v[t] == v[t - 1] {
                continue;
            }
            let dir: i8 = if v[t] > v[t - 1] { 1 } else { -1 };
            if prev_dir == 1 && dir == -1 {
                let mid = (run_start + t - 1) / 2;
                maxima.push((mid, v[mid]));
            } else if prev_dir == -1 && dir == 1 {
                let mid = (run_start + t - 1) / 2;
                minima.push((mid, v[mid]));
            }
            prev_dir = dir;
            run_start = t;
        }
    }
    ExtremaSet { maxima, minima }
}

/// Counts sign changes, attributing exact zeros to the preceding sign run
/// (so `+ 0 -` is one crossing and `+ 0 +` is none).
pub fn count_zero_crossings(v: &[f64]) -> usize {
    let mut crossings = 0;
    let mut prev_sign = 0i8;
    for &x in v {
        let s: i8 = if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        };
        if s == 0 {
            continue;
        }
        if prev_sign != 0 && s != prev_sign {
            crossings += 1;
        }
        prev_sign = s;
    }
    crossings
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_alternation_is_detected() {
        // 0 1 0 -1 0 1 0 -1 ... period-4 sawtooth.
        let v: Vec<f64> = (0..17).map(|i| [0.0, 1.0, 0.0, -1.0][i % 4]).collect();
        let e = find_extrema_values(&v);
        assert_eq!(
            e.maxima.iter().map(|&(i, _)| i).collect::<Vec<_>>(),
            vec![1, 5, 9, 13]
        );
        assert_eq!(
            e.minima.iter().map(|&(i, _)| i).collect::<Vec<_>>(),
            vec![3, 7, 11, 15]
        );
        assert!(e.supports_sifting());
    }

    #[test]
    fn plateau_yields_single_midpoint_extremum() {
        let e = find_extrema_values(&[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(e.maxima, vec![(1, 1.0)]);
        assert!(e.minima.is_empty());

        // Even-length plateau: midpoint rounds down.
        let e = find_extrema_values(&[0.0, 1.0, 1.0, 1.0, 0.0]);
        assert_eq!(e.maxima, vec![(2, 1.0)]);

        // Valley plateau.
        let e = find_extrema_values(&[1.0, -1.0, -1.0, 2.0]);
        assert_eq!(e.minima, vec![(1, -1.0)]);
    }

    #[test]
    fn edge_plateaus_and_monotone_runs_are_ignored() {
        assert_eq!(find_extrema_values(&[2.0, 2.0, 1.0, 0.0]).total(), 0);
        assert_eq!(find_extrema_values(&[0.0, 1.0, 2.0, 2.0]).total(), 0);
        assert_eq!(find_extrema_values(&[0.0, 1.0, 2.0, 3.0]).total(), 0);
        assert_eq!(find_extrema_values(&[1.0, 1.0, 1.0, 1.0]).total(), 0);
        assert_eq!(find_extrema_values(&[1.0, 2.0]).total(), 0);
    }

    #[test]
    fn maxima_and_minima_interleave_on_sampled_tone() {
        let v: Vec<f64> = (0..256).map(|t| (f64::from(t) * 0.37).sin()).collect();
        let e = find_extrema_values(&v);
        assert!(e.supports_sifting());
        let mut merged: Vec<(usize, bool)> = e
            .maxima
            .iter()
            .map(|&(i, _)| (i, true))
            .chain(e.minima.iter().map(|&(i, _)| (i, false)))
            .collect();
        merged.sort_unstable();
        for pair in merged.windows(2) {
            assert_ne!(pair[0].1, pair[1].1, "two consecutive extrema of one kind");
        }
    }

    #[test]
    fn zero_crossings_attribute_zeros_to_preceding_run() {
        assert_eq!(count_zero_crossings(&[1.0, 0.0, -1.0]), 1);
        assert_eq!(count_zero_crossings(&[1.0, 0.0, 1.0]), 0);
        assert_eq!(count_zero_crossings(&[0.0, 0.0, 1.0, -2.0, 3.0]), 2);
        assert_eq!(count_zero_crossings(&[]), 0);
        assert_eq!(count_zero_crossings(&[0.0, 0.0]), 0);
    }
}
