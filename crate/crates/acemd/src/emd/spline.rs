//! Natural cubic spline interpolation and envelope construction.

use crate::{Error, Result, SplineBoundary, TimeSeries};

/// Natural cubic spline through knots with strictly increasing abscissae.
///
/// "Natural" means zero second derivative at both end knots; with two knots
/// the spline degenerates to the straight line between them, and collinear
/// knots reproduce their line exactly (the minimum-curvature interpolant of
/// collinear points has zero curvature).
#[derive(Debug, Clone)]
pub(crate) struct CubicSpline {
    xs: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl CubicSpline {
    /// Fits the spline. Panics if fewer than two knots are supplied or the
    /// abscissae are not strictly increasing — callers guarantee both.
    pub(crate) fn fit(points: &[(f64, f64)]) -> Self {
        let n = points.len();
        assert!(n >= 2, "spline needs at least two knots");
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));

        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let a: Vec<f64> = points.iter().map(|p| p.1).collect();
        let m = n - 1; // segment count
        let h: Vec<f64> = (0..m).map(|i| xs[i + 1] - xs[i]).collect();

        // Thomas solve of the natural-boundary tridiagonal system for the
        // second-derivative coefficients c.
        let mut c = vec![0.0; n];
        if n > 2 {
            let mut l = vec![1.0; n];
            let mut mu = vec![0.0; n];
            let mut z = vec![0.0; n];
            for i in 1..m {
                let alpha =
                    3.0 / h[i] * (a[i + 1] - a[i]) - 3.0 / h[i - 1] * (a[i] - a[i - 1]);
                l[i] = 2.0 * (xs[i + 1] - xs[i - 1]) - h[i - 1] * mu[i - 1];
                mu[i] = h[i] / l[i];
                z[i] = (alpha - h[i - 1] * z[i - 1]) / l[i];
            }
            for i in (1..m).rev() {
                c[i] = z[i] - mu[i] * c[i + 1];
            }
        }

        let mut b = vec![0.0; m];
        let mut d = vec![0.0; m];
        for i in 0..m {
            b[i] = (a[i + 1] - a[i]) / h[i] - h[i] * (c[i + 1] + 2.0 * c[i]) / 3.0;
            d[i] = (c[i + 1] - c[i]) / (3.0 * h[i]);
        }

        Self { xs, a, b, c, d }
    }

    fn eval_segment(&self, seg: usize, t: f64) -> f64 {
        let dt = t - self.xs[seg];
        self.a[seg] + dt * (self.b[seg] + dt * (self.c[seg] + dt * self.d[seg]))
    }

    #[cfg(test)]
    pub(crate) fn eval(&self, t: f64) -> f64 {
        // Points beyond the knot span use the nearest end segment's cubic;
        // envelope callers extend knots past the grid so this is a fallback.
        let m = self.xs.len() - 1;
        let seg = match self.xs.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(m - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(m - 1),
        };
        self.eval_segment(seg, t)
    }

    /// Evaluates at integer abscissae `0..len` with a single monotone march
    /// over the segments.
    pub(crate) fn eval_grid(&self, len: usize, out: &mut Vec<f64>) {
        out.clear();
        out.reserve(len);
        let m = self.xs.len() - 1;
        let mut seg = 0usize;
        for t in 0..len {
            let t = t as f64;
            while seg + 1 < m && t >= self.xs[seg + 1] {
                seg += 1;
            }
            out.push(self.eval_segment(seg, t));
        }
    }
}

/// Extends extrema knots past both ends of the grid `0..=len-1` according to
/// the boundary policy, returning knots ready for spline fitting.
///
/// Mirror: the two outermost extrema on each side are reflected across the
/// end sample's *position* (values kept), so the envelope continues its
/// interior oscillation pattern past the ends. Clamp: the end samples
/// themselves become knots, pinning the envelope to the data at the edges.
pub(crate) fn extend_knots(
    pts: &[(usize, f64)],
    series: &[f64],
    boundary: SplineBoundary,
) -> Vec<(f64, f64)> {
    let last = series.len() - 1;
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(pts.len() + 4);
    match boundary {
        SplineBoundary::Mirror => {
            for &(i, v) in pts.iter().take(2).rev() {
                if i > 0 {
                    knots.push((-(i as f64), v));
                }
            }
            knots.extend(pts.iter().map(|&(i, v)| (i as f64, v)));
            // Reflection reverses order: the last extremum lands nearest the
            // end, so walk the originals backwards.
            for &(i, v) in pts.iter().rev().take(2) {
                if i < last {
                    knots.push(((2 * last - i) as f64, v));
                }
            }
        }
        SplineBoundary::Clamp => {
            if pts.first().is_none_or(|&(i, _)| i > 0) {
                knots.push((0.0, series[0]));
            }
            knots.extend(pts.iter().map(|&(i, v)| (i as f64, v)));
            if pts.last().is_none_or(|&(i, _)| i < last) {
                knots.push((last as f64, series[last]));
            }
        }
    }
    knots
}

pub(crate) fn envelope_values(
    series: &[f64],
    pts: &[(usize, f64)],
    boundary: SplineBoundary,
    out: &mut Vec<f64>,
) -> Result<()> {
    let knots = extend_knots(pts, series, boundary);
    if knots.len() < 2 {
        return Err(Error::InsufficientExtrema {
            num_maxima: pts.len(),
            num_minima: 0,
        });
    }
    CubicSpline::fit(&knots).eval_grid(series.len(), out);
    Ok(())
}

/// Natural cubic spline envelope through the given extrema, extended past
/// the ends by `boundary`, evaluated on the series' full grid.
pub fn envelope(
    x: &TimeSeries,
    pts: &[(usize, f64)],
    boundary: SplineBoundary,
) -> Result<TimeSeries> {
    let mut out = Vec::new();
    envelope_values(x.values(), pts, boundary, &mut out)?;
    Ok(x.same_index(format!("{}.envelope", x.label()), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_knots_give_the_connecting_line() {
        let s = CubicSpline::fit(&[(0.0, 1.0), (4.0, 3.0)]);
        for t in 0..=8 {
            let t = f64::from(t) / 2.0;
            assert!((s.eval(t) - (1.0 + 0.5 * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn collinear_knots_reproduce_the_line_exactly() {
        let knots: Vec<(f64, f64)> = [0.0, 1.0, 2.5, 4.0, 7.0, 11.0]
            .iter()
            .map(|&t| (t, -2.0 + 0.75 * t))
            .collect();
        let s = CubicSpline::fit(&knots);
        for i in 0..=110 {
            let t = f64::from(i) * 0.1;
            assert!((s.eval(t) - (-2.0 + 0.75 * t)).abs() < 1e-10);
        }
    }

    #[test]
    fn spline_passes_through_every_knot() {
        let knots = [
            (0.0, 0.3),
            (2.0, -1.1),
            (3.0, 4.0),
            (5.5, 0.0),
            (9.0, 2.2),
        ];
        let s = CubicSpline::fit(&knots);
        for &(t, v) in &knots {
            assert!((s.eval(t) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_of_tone_maxima_is_flat() {
        // Period 32 divides the grid, so every peak sample is exactly 1.
        let v: Vec<f64> = (0..256)
            .map(|t| (2.0 * std::f64::consts::PI * f64::from(t) / 32.0).sin())
            .collect();
        let x = TimeSeries::from_values("tone", v).unwrap();
        let e = crate::emd::find_extrema(&x);
        let upper = envelope(&x, &e.maxima, SplineBoundary::Mirror).unwrap();
        // Interior deviation from the constant amplitude stays small.
        for t in 13..243 {
            assert!(
                (upper.values()[t] - 1.0).abs() < 0.05,
                "t={t}: {}",
                upper.values()[t]
            );
        }
    }

    #[test]
    fn mirror_extension_covers_the_grid() {
        let v: Vec<f64> = (0..64)
            .map(|t| (2.0 * std::f64::consts::PI * f64::from(t) / 16.0).sin())
            .collect();
        let e = crate::emd::extrema::find_extrema_values(&v);
        let knots = extend_knots(&e.maxima, &v, SplineBoundary::Mirror);
        assert!(knots.first().unwrap().0 < 0.0);
        assert!(knots.last().unwrap().0 > 63.0);
        assert!(knots.windows(2).all(|w| w[0].0 < w[1].0));

        let clamped = extend_knots(&e.maxima, &v, SplineBoundary::Clamp);
        assert_eq!(clamped.first().unwrap(), &(0.0, v[0]));
        assert_eq!(clamped.last().unwrap(), &(63.0, v[63]));
    }

    #[test]
    fn envelope_needs_a_knot() {
        let x = TimeSeries::from_values("flat", vec![1.0; 16]).unwrap();
        assert!(envelope(&x, &[], SplineBoundary::Mirror).is_err());
        // Clamp can fall back to the end samples alone.
        assert!(envelope(&x, &[], SplineBoundary::Clamp).is_ok());
    }
}
