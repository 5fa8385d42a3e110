//! Discrete Hilbert transform via the frequency-domain analytic-signal
//! construction.
//!
//! The analytic signal of a real series keeps the DC bin, doubles the
//! positive-frequency bins, keeps the Nyquist bin (even lengths), and zeroes
//! the negative-frequency bins of the DFT; the inverse transform's imaginary
//! part is the Hilbert transform. Exact for full-period tones, which is what
//! the tests pin down.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Minimum length for a meaningful discrete transform.
pub(crate) const MIN_TRANSFORM_LEN: usize = 8;

/// Complex analytic signal `x(t) + i·H[x](t)`.
pub(crate) fn analytic_signal(values: &[f64]) -> Result<Vec<Complex<f64>>> {
    let n = values.len();
    if n < MIN_TRANSFORM_LEN {
        return Err(Error::TooShort {
            len: n,
            min: MIN_TRANSFORM_LEN,
        });
    }
    let mut buf: Vec<Complex<f64>> = values.iter().map(|v| Complex::new(*v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, z) in buf.iter_mut().enumerate() {
        // Bin k = 0 is DC; bins with 2k < n are positive frequencies; 2k = n
        // is Nyquist (even lengths only); the rest are negative frequencies.
        let weight = if k == 0 || 2 * k == n {
            1.0
        } else if 2 * k < n {
            2.0
        } else {
            0.0
        };
        *z *= weight;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for z in &mut buf {
        *z *= scale;
    }
    Ok(buf)
}

/// Hilbert transform of a series: the quadrature component that lags every
/// positive-frequency tone by a quarter period.
pub fn hilbert_transform(x: &TimeSeries) -> Result<TimeSeries> {
    let analytic = analytic_signal(x.values())?;
    let imag: Vec<f64> = analytic.iter().map(|z| z.im).collect();
    Ok(x.same_index(format!("{}_hilbert", x.label()), imag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(values: Vec<f64>) -> TimeSeries {
        TimeSeries::from_values("x", values).unwrap()
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn full_period_cosine_maps_to_sine() {
        let n = 512;
        let k = 5.0;
        let cos: Vec<f64> = (0..n)
            .map(|t| (std::f64::consts::TAU * k * t as f64 / n as f64).cos())
            .collect();
        let sin: Vec<f64> = (0..n)
            .map(|t| (std::f64::consts::TAU * k * t as f64 / n as f64).sin())
            .collect();
        let h = hilbert_transform(&series(cos)).unwrap();
        assert!(max_abs_diff(h.values(), &sin) < 1e-10);
    }

    #[test]
    fn constant_series_has_no_quadrature() {
        let h = hilbert_transform(&series(vec![3.5; 64])).unwrap();
        assert!(h.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn nonperiodic_tone_matches_quadrature_in_the_interior() {
        // Period does not divide the record length, so the DFT method leaks at
        // the edges; the interior must still track the analytic quadrature.
        let n = 1024;
        let period = 37.3;
        let x: Vec<f64> = (0..n)
            .map(|t| (std::f64::consts::TAU * t as f64 / period).cos())
            .collect();
        let target: Vec<f64> = (0..n)
            .map(|t| (std::f64::consts::TAU * t as f64 / period).sin())
            .collect();
        let h = hilbert_transform(&series(x)).unwrap();
        let interior = n / 10..n - n / 10;
        let mut err = 0.0;
        let mut norm = 0.0;
        for t in interior {
            err += (h.values()[t] - target[t]).powi(2);
            norm += target[t].powi(2);
        }
        assert!((err / norm).sqrt() < 1e-2);
    }

    #[test]
    fn transform_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 256;
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (a, b) = (2.5, -0.75);
        let combo: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();

        let hx = hilbert_transform(&series(x)).unwrap();
        let hy = hilbert_transform(&series(y)).unwrap();
        let hc = hilbert_transform(&series(combo)).unwrap();
        let recombined: Vec<f64> = hx
            .values()
            .iter()
            .zip(hy.values())
            .map(|(u, v)| a * u + b * v)
            .collect();
        let peak = hc.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max_abs_diff(hc.values(), &recombined) < 1e-10 * peak.max(1.0));
    }

    #[test]
    fn double_transform_negates_periodic_tones() {
        let n = 256;
        let x: Vec<f64> = (0..n)
            .map(|t| (std::f64::consts::TAU * 3.0 * t as f64 / n as f64).cos())
            .collect();
        let once = hilbert_transform(&series(x.clone())).unwrap();
        let twice = hilbert_transform(&once).unwrap();
        let negated: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!(max_abs_diff(twice.values(), &negated) < 1e-8);
    }

    #[test]
    fn rejects_short_input() {
        assert!(matches!(
            hilbert_transform(&series(vec![1.0; 7])),
            Err(Error::TooShort { len: 7, min: 8 })
        ));
    }
}
