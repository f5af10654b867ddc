//! Semilog BER plots as standalone SVG.
//!
//! Measured points with at least one error are joined into one polyline per
//! `(decoder, alpha)` curve. Points with no errors have no finite logarithm;
//! they are drawn as hollow markers at the upper end of their confidence
//! interval instead. Noiseless (`inf` dB) points have no x position and are
//! left out.

use std::fmt::Write as _;
use std::path::Path;

use sefdm_core::harness::theoretical_ber;
use sefdm_core::{Alpha, BerRecord, DecoderKind};

use crate::{create_parent, CliError};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 540.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const THEORY_SAMPLES: usize = 200;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Curve {
    decoder: DecoderKind,
    alpha: Alpha,
    /// `(ebn0_db, ber)` with `ber > 0`.
    measured: Vec<(f64, f64)>,
    /// `(ebn0_db, ci_high)` for points without errors.
    zero: Vec<(f64, f64)>,
}

struct Axes {
    x0: f64,
    x1: f64,
    /// Decades: `y0 < y1`, both integers.
    y0: f64,
    y1: f64,
}

impl Axes {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, ber: f64) -> f64 {
        let y = ber.log10().clamp(self.y0, self.y1);
        TOP + (self.y1 - y) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn curves(records: &[BerRecord]) -> Vec<Curve> {
    let mut out: Vec<Curve> = Vec::new();
    for r in records {
        if !r.ebn0_db.is_finite() {
            continue;
        }
        let alpha = r.config.alpha();
        let idx = match out.iter().position(|c| c.decoder == r.decoder && c.alpha == alpha) {
            Some(i) => i,
            None => {
                out.push(Curve {
                    decoder: r.decoder,
                    alpha,
                    measured: Vec::new(),
                    zero: Vec::new(),
                });
                out.len() - 1
            }
        };
        let c = &mut out[idx];
        if r.bit_errors > 0 {
            c.measured.push((r.ebn0_db, r.ber));
        } else {
            c.zero.push((r.ebn0_db, r.ci_high));
        }
    }
    for c in &mut out {
        c.measured.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

/// Step between labeled x ticks: 1, 2 or 5 times a power of ten, giving at
/// most about ten ticks.
fn tick_step(span: f64) -> f64 {
    let raw = span / 10.0;
    let base = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * base)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * base)
}

fn fmt_tick(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".into()
    } else {
        r.to_string()
    }
}

/// Render the plot to a string.
pub fn render_plot(records: &[BerRecord]) -> Result<String, CliError> {
    let curves = curves(records);
    if curves.is_empty() {
        return Err(CliError::Invalid("no finite Eb/N0 points to plot".into()));
    }
    let xs = curves.iter().flat_map(|c| c.measured.iter().chain(&c.zero).map(|p| p.0));
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if x1 - x0 < 1e-9 {
        x0 -= 1.0;
        x1 += 1.0;
    }

    let alphabet = records[0].config.alphabet();
    let theory: Vec<(f64, f64)> = (0..=THEORY_SAMPLES)
        .filter_map(|i| {
            let x = x0 + (x1 - x0) * i as f64 / THEORY_SAMPLES as f64;
            theoretical_ber(x, alphabet).ok().map(|b| (x, b))
        })
        .collect();

    let ys = curves
        .iter()
        .flat_map(|c| c.measured.iter().chain(&c.zero).map(|p| p.1))
        .filter(|&b| b > 0.0);
    let lowest = ys.fold(f64::INFINITY, f64::min);
    let highest = curves
        .iter()
        .flat_map(|c| c.measured.iter().chain(&c.zero).map(|p| p.1))
        .fold(0.0f64, f64::max);
    let mut y0 = if lowest.is_finite() { lowest.log10().floor() } else { -6.0 };
    // keep the theory curve in view unless it drops far below the data
    if let Some(&(_, t)) = theory.last() {
        if t > 0.0 {
            y0 = y0.min(t.log10().floor().max(y0 - 2.0));
        }
    }
    let y1 = if highest > 0.0 { highest.log10().ceil().min(0.0) } else { 0.0 };
    let y1 = if y1 <= y0 { y0 + 1.0 } else { y1 };
    let axes = Axes { x0, x1, y0, y1 };

    let mut s = String::new();
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let cfg = &records[0].config;
    let title = format!(
        "N = {}, M = {}, {}",
        cfg.n_carriers(),
        cfg.n_samples(),
        cfg.alphabet().name()
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&title));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // grid and ticks
    let _ = writeln!(s, r##"<g id="grid" stroke="#dddddd" stroke-width="1">"##);
    let step = tick_step(x1 - x0);
    let mut xt = (x0 / step).ceil() * step;
    let mut xticks = Vec::new();
    while xt <= x1 + 1e-9 * step {
        let px = axes.px(xt);
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}"/>"#, TOP + ph);
        xticks.push((px, xt));
        xt += step;
    }
    let mut yticks = Vec::new();
    let mut d = y0;
    while d <= y1 + 1e-9 {
        let py = axes.py(10f64.powf(d));
        let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}"/>"#, LEFT + pw);
        yticks.push((py, d));
        d += 1.0;
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<g id="x-ticks" text-anchor="middle">"#);
    for (px, v) in xticks {
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}">{}</text>"#, TOP + ph + 18.0, fmt_tick(v));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="y-ticks" text-anchor="end">"#);
    for (py, d) in yticks {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">1e{}</text>"#, LEFT - 8.0, py + 4.0, d as i64);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Eb/N0 (dB)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">BER</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let mut legend: Vec<(String, String, &str)> = Vec::new();
    let visible: Vec<(f64, f64)> = theory
        .iter()
        .copied()
        .filter(|&(_, b)| b > 0.0 && b.log10() >= y0)
        .collect();
    if visible.len() >= 2 {
        let pts: Vec<String> = visible.iter().map(|&(x, b)| format!("{:.2},{:.2}", axes.px(x), axes.py(b))).collect();
        let _ = writeln!(
            s,
            r#"<polyline id="theory" fill="none" stroke="black" stroke-dasharray="6 4" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        legend.push(("theory".into(), "black".into(), "6 4"));
    }

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let label = format!("{} alpha={}", c.decoder.name(), c.alpha);
        let id = format!("curve-{}-{}-{}", c.decoder.name(), c.alpha.num(), c.alpha.den());
        let _ = writeln!(s, r#"<g id="{}" stroke="{color}" data-label="{}">"#, escape(&id), escape(&label));
        if c.measured.len() >= 2 {
            let pts: Vec<String> = c
                .measured
                .iter()
                .map(|&(x, b)| format!("{:.2},{:.2}", axes.px(x), axes.py(b)))
                .collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke-width="2" points="{}"/>"#, pts.join(" "));
        }
        for &(x, b) in &c.measured {
            let _ = writeln!(
                s,
                r#"<circle class="measured" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                axes.px(x),
                axes.py(b)
            );
        }
        for &(x, b) in &c.zero {
            let _ = writeln!(
                s,
                r#"<circle class="zero-error" cx="{:.2}" cy="{:.2}" r="5" fill="white" stroke-width="1.5"><title>no errors; 95% upper bound {}</title></circle>"#,
                axes.px(x),
                axes.py(b),
                b
            );
        }
        let _ = writeln!(s, "</g>");
        legend.push((label, color.into(), ""));
    }

    let _ = writeln!(s, r#"<g id="legend">"#);
    let lx = WIDTH - RIGHT + 15.0;
    for (i, (label, color, dash)) in legend.iter().enumerate() {
        let ly = TOP + 15.0 + 20.0 * i as f64;
        let dash = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.2}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#,
            lx + 25.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 32.0, ly + 4.0, escape(label));
    }
    let n_legend = legend.len() as f64;
    let _ = writeln!(
        s,
        r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="white" stroke="black"/><text x="{:.2}" y="{:.2}">no errors (upper bound)</text>"#,
        lx + 12.5,
        TOP + 15.0 + 20.0 * n_legend,
        lx + 32.0,
        TOP + 19.0 + 20.0 * n_legend
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn emit_plot(records: &[BerRecord], path: &Path) -> Result<(), CliError> {
    let svg = render_plot(records)?;
    create_parent(path)?;
    std::fs::write(path, svg).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
