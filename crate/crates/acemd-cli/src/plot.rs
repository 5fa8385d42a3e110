//! Hand-rolled SVG scatter of the energy–frequency cloud.
//!
//! Log–log axes, the per-sample cloud in light blue, per-mode central points
//! in red, and the fitted power law as a straight line. Static vector output
//! only — no scripting, no external assets.

use std::fmt::Write as _;

use acemd::{SpectrumPoint, SpectrumSummary};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 52.0;

/// At most this many cloud points are drawn (deterministic stride
/// subsampling) to keep files small.
const MAX_CLOUD_POINTS: usize = 4000;

struct LogAxes {
    fmin: f64,
    fmax: f64,
    emin: f64,
    emax: f64,
}

impl LogAxes {
    fn x(&self, f: f64) -> f64 {
        let span = self.fmax - self.fmin;
        MARGIN_L + (f.log10() - self.fmin) / span * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn y(&self, e: f64) -> f64 {
        let span = self.emax - self.emin;
        HEIGHT - MARGIN_B - (e.log10() - self.emin) / span * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

/// Renders the spectrum scatter. `points` is the sparse per-sample cloud;
/// the summary supplies central points and the fitted exponent.
pub fn spectrum_svg(points: &[SpectrumPoint], summary: &SpectrumSummary) -> String {
    let mut logf: Vec<f64> = Vec::new();
    let mut loge: Vec<f64> = Vec::new();
    for p in points.iter().filter(|p| p.frequency > 0.0 && p.energy > 0.0) {
        logf.push(p.frequency.log10());
        loge.push(p.energy.log10());
    }
    for (f, e) in summary
        .central_frequencies
        .iter()
        .zip(&summary.central_energies)
    {
        logf.push(f.log10());
        loge.push(e.log10());
    }
    let pad = 0.25;
    let axes = LogAxes {
        fmin: logf.iter().copied().fold(f64::INFINITY, f64::min) - pad,
        fmax: logf.iter().copied().fold(f64::NEG_INFINITY, f64::max) + pad,
        emin: loge.iter().copied().fold(f64::INFINITY, f64::min) - pad,
        emax: loge.iter().copied().fold(f64::NEG_INFINITY, f64::max) + pad,
    };

    let mut svg = String::new();
    let _ = write!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"##
    );
    let _ = write!(
        svg,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );

    grid_and_ticks(&mut svg, &axes);

    // Cloud, stride-subsampled for size.
    let stride = points.len().div_ceil(MAX_CLOUD_POINTS).max(1);
    for p in points
        .iter()
        .step_by(stride)
        .filter(|p| p.frequency > 0.0 && p.energy > 0.0)
    {
        let _ = write!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="1.4" fill="#4878a8" fill-opacity="0.25"/>"##,
            axes.x(p.frequency),
            axes.y(p.energy)
        );
    }

    // Fitted line through the central points: log E = -alpha log f + b.
    if summary.central_frequencies.len() >= 2 {
        let n = summary.central_frequencies.len() as f64;
        let mlf = summary
            .central_frequencies
            .iter()
            .map(|f| f.ln())
            .sum::<f64>()
            / n;
        let mle = summary.central_energies.iter().map(|e| e.ln()).sum::<f64>() / n;
        let intercept = mle + summary.alpha * mlf; // natural-log units
        let ln10 = std::f64::consts::LN_10;
        let line_y = |logf: f64| (-summary.alpha * logf * ln10 + intercept) / ln10;
        let (x0, x1) = (axes.fmin + pad, axes.fmax - pad);
        let _ = write!(
            svg,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#2c3e50" stroke-width="1.5" stroke-dasharray="6 3"/>"##,
            axes.x(10f64.powf(x0)),
            axes.y(10f64.powf(line_y(x0))),
            axes.x(10f64.powf(x1)),
            axes.y(10f64.powf(line_y(x1)))
        );
    }

    // Central points on top.
    for (f, e) in summary
        .central_frequencies
        .iter()
        .zip(&summary.central_energies)
    {
        let _ = write!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4.5" fill="#c0392b" stroke="#ffffff" stroke-width="1.2"/>"##,
            axes.x(*f),
            axes.y(*e)
        );
    }

    let _ = write!(
        svg,
        r##"<text x="{:.0}" y="{:.0}" font-family="monospace" font-size="13" fill="#2c3e50">alpha = {:.4}   R&#178; = {:.4}   modes = {}</text>"##,
        MARGIN_L + 8.0,
        MARGIN_T + 6.0,
        summary.alpha,
        summary.r_squared,
        summary.modes_used
    );
    let _ = write!(
        svg,
        r##"<text x="{:.0}" y="{:.0}" font-family="monospace" font-size="12" fill="#555555" text-anchor="middle">frequency (cycles/observation, log scale)</text>"##,
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 12.0
    );
    let _ = write!(
        svg,
        r##"<text x="16" y="{:.0}" font-family="monospace" font-size="12" fill="#555555" text-anchor="middle" transform="rotate(-90 16 {:.0})">energy (log scale)</text>"##,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn grid_and_ticks(svg: &mut String, axes: &LogAxes) {
    let _ = write!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.0}" height="{:.0}" fill="none" stroke="#999999"/>"##,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    );
    for d in (axes.fmin.ceil() as i64)..=(axes.fmax.floor() as i64) {
        let x = axes.x(10f64.powi(d as i32));
        let _ = write!(
            svg,
            r##"<line x1="{x:.2}" y1="{MARGIN_T}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            HEIGHT - MARGIN_B
        );
        let _ = write!(
            svg,
            r##"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="11" fill="#555555" text-anchor="middle">1e{d}</text>"##,
            HEIGHT - MARGIN_B + 16.0
        );
    }
    for d in (axes.emin.ceil() as i64)..=(axes.emax.floor() as i64) {
        let y = axes.y(10f64.powi(d as i32));
        let _ = write!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            WIDTH - MARGIN_R
        );
        let _ = write!(
            svg,
            r##"<text x="{:.2}" y="{y:.2}" font-family="monospace" font-size="11" fill="#555555" text-anchor="end" dominant-baseline="middle">1e{d}</text>"##,
            MARGIN_L - 6.0
        );
    }
}
