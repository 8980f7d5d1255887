//! Static SVG rendering: noise-profile heatmaps and logical-error-rate
//! performance curves with threshold and BAD markers.
//!
//! Output is a deterministic function of the inputs: fixed layout, fixed
//! palette, fixed float formatting.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiment::{BadBoundary, BadCrossing, PointNoise, SweepPoint, POOLED_DRAW};
use crate::lattice::{Lattice, QubitKind};
use crate::noise::NoiseProfile;

/// Axis scale for curve plots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisScale {
    Log,
    Linear,
}

/// Rendering options for [`render_curves`].
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub title: String,
    pub x_label: String,
    pub x_scale: AxisScale,
    pub y_scale: AxisScale,
    /// Draw a horizontal threshold line at this value.
    pub threshold: Option<f64>,
}

impl Default for CurveSpec {
    fn default() -> CurveSpec {
        CurveSpec {
            title: "logical error rate per round".into(),
            x_label: "physical error rate".into(),
            x_scale: AxisScale::Log,
            y_scale: AxisScale::Log,
            threshold: Some(crate::experiment::DEFAULT_EPSILON_THR),
        }
    }
}

/// Fixed series palette.
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Viridis anchors at eighths, linearly interpolated between.
const VIRIDIS: [(u8, u8, u8); 9] = [
    (68, 1, 84),
    (71, 44, 122),
    (59, 81, 139),
    (44, 113, 142),
    (33, 144, 141),
    (39, 173, 129),
    (92, 200, 99),
    (170, 220, 50),
    (253, 231, 37),
];

fn viridis(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let scaled = t * (VIRIDIS.len() - 1) as f64;
    let i = (scaled.floor() as usize).min(VIRIDIS.len() - 2);
    let f = scaled - i as f64;
    let (r0, g0, b0) = VIRIDIS[i];
    let (r1, g1, b1) = VIRIDIS[i + 1];
    let lerp = |a: u8, b: u8| -> u8 { (f64::from(a) + f * (f64::from(b) - f64::from(a))).round() as u8 };
    (lerp(r0, r1), lerp(g0, g1), lerp(b0, b1))
}

fn rgb(c: (u8, u8, u8)) -> String {
    format!("#{:02x}{:02x}{:02x}", c.0, c.1, c.2)
}

/// Deterministic numeric label: plain decimals for moderate magnitudes,
/// exponent form for tiny ones.
fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() < 1e-4 || v.abs() >= 1e6 {
        return format!("{v:e}");
    }
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn fmt_px(v: f64) -> String {
    format!("{v:.2}")
}

/// Render a per-qubit rate heatmap: colored cells on the half-integer grid,
/// `+` glyphs on data qubits and `X` glyphs on measure qubits, with a
/// numeric color legend.
pub fn render_heatmap(profile: &NoiseProfile, lattice: &Lattice, title: &str) -> Result<String> {
    if profile.distance() != lattice.distance() {
        return Err(Error::ProfileMismatch {
            profile_d: profile.distance(),
            lattice_d: lattice.distance(),
        });
    }
    let d = lattice.distance();
    let unit = 56.0; // pixels per full lattice step
    let margin = 48.0;
    let legend_w = 96.0;
    let grid = (f64::from(d) + 0.0) * unit; // coordinates run 0.5 ..= d+0.5
    let width = margin * 2.0 + grid + legend_w;
    let height = margin * 2.0 + grid + 24.0;

    let lo = profile.rates().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = profile
        .rates()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let norm = |p: f64| -> f64 {
        if hi > lo {
            (p - lo) / (hi - lo)
        } else {
            0.5
        }
    };
    let px = |coord: f64| margin + (coord - 0.5) * unit;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt_px(width),
        fmt_px(height),
        fmt_px(width),
        fmt_px(height)
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"15\" fill=\"#000000\">{}</text>",
        fmt_px(margin),
        xml_escape(title)
    );

    let cell = unit * 0.46;
    for q in lattice.qubits() {
        let p = profile.rate(q.index);
        let color = rgb(viridis(norm(p)));
        let cx = px(q.coord.x());
        let cy = px(q.coord.y());
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"><title>({}, {}) p={}</title></rect>",
            fmt_px(cx - cell / 2.0),
            fmt_px(cy - cell / 2.0),
            fmt_px(cell),
            fmt_px(cell),
            color,
            fmt_value(q.coord.x()),
            fmt_value(q.coord.y()),
            fmt_value(p)
        );
        let glyph = match q.kind {
            QubitKind::Data => "+",
            QubitKind::MeasureX | QubitKind::MeasureZ => "X",
        };
        // Keep glyphs readable on both ends of the ramp.
        let glyph_color = if norm(p) > 0.6 { "#000000" } else { "#ffffff" };
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" fill=\"{}\">{}</text>",
            fmt_px(cx),
            fmt_px(cy + 5.0),
            glyph_color,
            glyph
        );
    }

    // Legend: vertical ramp with min/mid/max labels.
    let lx = margin + grid + 32.0;
    let ly = margin;
    let lh = grid;
    let steps = 48;
    for i in 0..steps {
        let t0 = i as f64 / steps as f64;
        let color = rgb(viridis(1.0 - t0 - 0.5 / steps as f64));
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"18\" height=\"{}\" fill=\"{}\"/>",
            fmt_px(lx),
            fmt_px(ly + t0 * lh),
            fmt_px(lh / steps as f64 + 0.5),
            color
        );
    }
    for (frac, value) in [(0.0, hi), (0.5, (lo + hi) / 2.0), (1.0, lo)] {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" fill=\"#000000\">{}</text>",
            fmt_px(lx + 24.0),
            fmt_px(ly + frac * lh + 4.0),
            fmt_value(value)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write a heatmap SVG to a file.
pub fn emit_heatmap(
    profile: &NoiseProfile,
    lattice: &Lattice,
    title: &str,
    path: &std::path::Path,
) -> Result<()> {
    let svg = render_heatmap(profile, lattice, title)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path.display().to_string(), e))
}

struct Series {
    label: String,
    /// Line vertices (pooled or homogeneous points).
    line: Vec<(f64, f64, f64, f64)>, // x, eps, ci_lo, ci_hi
    /// Individual heterogeneous draws, drawn as faint dots.
    dots: Vec<(f64, f64)>,
    /// BAD markers (noise value at the threshold line).
    bads: Vec<f64>,
}

fn series_label(points: &[&SweepPoint], p: &SweepPoint) -> String {
    let mut parts = vec![format!("d={}", p.d)];
    let sigmas: std::collections::BTreeSet<u64> =
        points.iter().map(|q| q.p_sigma().to_bits()).collect();
    if (sigmas.len() > 1 || p.p_sigma() > 0.0)
        && matches!(p.noise, PointNoise::Heterogeneous { .. }) {
            parts.push(format!("sigma={}", fmt_value(p.p_sigma())));
        }
    let defects: std::collections::BTreeSet<Option<String>> = points
        .iter()
        .map(|q| q.defect.as_ref().map(|def| format!("{}", def.p_def)))
        .collect();
    match &p.defect {
        Some(def) => parts.push(format!("p_def={}", fmt_value(def.p_def))),
        None if defects.len() > 1 => parts.push("no defect".into()),
        None => {}
    }
    parts.join(" ")
}

/// Render performance curves: one series per (d, p_sigma, defect) group,
/// log-log axes by default, confidence-interval bars, the threshold line,
/// and a diamond at every crossed BAD.
pub fn render_curves(
    points: &[SweepPoint],
    boundaries: &[BadBoundary],
    spec: &CurveSpec,
) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyInput("no sweep points to plot"));
    }
    let refs: Vec<&SweepPoint> = points.iter().collect();

    // Group into series by (d, p_sigma, defect), first-appearance order.
    let key = |p: &SweepPoint| {
        (
            p.d,
            p.p_sigma().to_bits(),
            p.defect
                .as_ref()
                .map(|def| (def.location.clone(), def.p_def.to_bits())),
        )
    };
    type SeriesKey = (u32, u64, Option<(String, u64)>);
    let mut series: Vec<(SeriesKey, Series)> = Vec::new();
    for p in points {
        let k = key(p);
        if !series.iter().any(|(sk, _)| *sk == k) {
            series.push((
                k.clone(),
                Series {
                    label: series_label(&refs, p),
                    line: Vec::new(),
                    dots: Vec::new(),
                    bads: Vec::new(),
                },
            ));
        }
        let entry = &mut series.iter_mut().find(|(sk, _)| *sk == k).unwrap().1;
        let is_line = match &p.noise {
            PointNoise::Homogeneous { .. } => true,
            PointNoise::Heterogeneous { draw, .. } => *draw == POOLED_DRAW,
        };
        if is_line {
            entry
                .line
                .push((p.noise_value(), p.eps_round, p.ci_lo, p.ci_hi));
        } else {
            entry.dots.push((p.noise_value(), p.eps_round));
        }
    }
    // Heterogeneous sweeps without pooled rows still need lines.
    for (_, s) in series.iter_mut() {
        if s.line.is_empty() {
            s.line = s.dots.iter().map(|&(x, y)| (x, y, y, y)).collect();
            s.dots.clear();
        }
        s.line.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    for b in boundaries {
        if let BadCrossing::Crossed { value, .. } = &b.crossing {
            let bk = (
                b.d,
                b.p_sigma.to_bits(),
                b.defect
                    .as_ref()
                    .map(|def| (def.location.clone(), def.p_def.to_bits())),
            );
            if let Some((_, s)) = series.iter_mut().find(|(sk, _)| *sk == bk) {
                s.bads.push(*value);
            }
        }
    }

    // Data ranges (skip non-positive values on log axes).
    let positive = |v: f64, scale: AxisScale| v > 0.0 || scale == AxisScale::Linear;
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (_, s) in &series {
        for &(x, y, lo, hi) in &s.line {
            if positive(x, spec.x_scale) {
                xs.push(x);
            }
            if positive(y, spec.y_scale) {
                ys.push(y);
            }
            if positive(lo, spec.y_scale) && lo > 0.0 {
                ys.push(lo);
            }
            if positive(hi, spec.y_scale) {
                ys.push(hi);
            }
        }
        for &(x, y) in &s.dots {
            if positive(x, spec.x_scale) {
                xs.push(x);
            }
            if positive(y, spec.y_scale) {
                ys.push(y);
            }
        }
    }
    if let Some(t) = spec.threshold {
        ys.push(t);
    }
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyInput("no plottable points (all zero?)"));
    }
    let (x_lo, x_hi) = expand_range(min_of(&xs), max_of(&xs), spec.x_scale);
    let (y_lo, y_hi) = expand_range(min_of(&ys), max_of(&ys), spec.y_scale);

    let width = 860.0;
    let height = 560.0;
    let (ml, mr, mt, mb) = (84.0, 190.0, 48.0, 64.0);
    let pw = width - ml - mr;
    let ph = height - mt - mb;
    let to_x = |v: f64| -> f64 {
        let t = match spec.x_scale {
            AxisScale::Log => (v.ln() - x_lo.ln()) / (x_hi.ln() - x_lo.ln()),
            AxisScale::Linear => (v - x_lo) / (x_hi - x_lo),
        };
        ml + t * pw
    };
    let to_y = |v: f64| -> f64 {
        let t = match spec.y_scale {
            AxisScale::Log => (v.ln() - y_lo.ln()) / (y_hi.ln() - y_lo.ln()),
            AxisScale::Linear => (v - y_lo) / (y_hi - y_lo),
        };
        mt + (1.0 - t) * ph
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(svg, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"28\" font-family=\"monospace\" font-size=\"15\" fill=\"#000000\">{}</text>",
        fmt_px(ml),
        xml_escape(&spec.title)
    );
    // Frame.
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>",
        fmt_px(ml),
        fmt_px(mt),
        fmt_px(pw),
        fmt_px(ph)
    );

    // Ticks.
    for (v, label) in ticks(x_lo, x_hi, spec.x_scale) {
        let x = to_x(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#cccccc\"/>",
            fmt_px(x),
            fmt_px(mt),
            fmt_px(mt + ph)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\" fill=\"#000000\">{}</text>",
            fmt_px(x),
            fmt_px(mt + ph + 18.0),
            label
        );
    }
    for (v, label) in ticks(y_lo, y_hi, spec.y_scale) {
        let y = to_y(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#cccccc\"/>",
            fmt_px(y),
            fmt_px(ml),
            fmt_px(ml + pw)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\" fill=\"#000000\">{}</text>",
            fmt_px(ml - 6.0),
            fmt_px(y + 4.0),
            label
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" fill=\"#000000\">{}</text>",
        fmt_px(ml + pw / 2.0),
        fmt_px(height - 18.0),
        xml_escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\" fill=\"#000000\">eps_round</text>",
        fmt_px(mt + ph / 2.0),
        fmt_px(mt + ph / 2.0)
    );

    // Threshold line.
    if let Some(t) = spec.threshold {
        let y = to_y(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000000\" stroke-dasharray=\"7,4\"/>",
            fmt_px(ml),
            fmt_px(y),
            fmt_px(ml + pw)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" fill=\"#000000\">eps_thr={}</text>",
            fmt_px(ml + 6.0),
            fmt_px(y - 5.0),
            fmt_value(t)
        );
    }

    // Series.
    for (si, (_, s)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let visible: Vec<&(f64, f64, f64, f64)> = s
            .line
            .iter()
            .filter(|(x, y, _, _)| positive(*x, spec.x_scale) && positive(*y, spec.y_scale))
            .collect();
        if visible.len() >= 2 {
            let mut path = String::new();
            for (i, (x, y, _, _)) in visible.iter().enumerate() {
                let _ = write!(
                    path,
                    "{}{},{} ",
                    if i == 0 { "M" } else { "L" },
                    fmt_px(to_x(*x)),
                    fmt_px(to_y(*y))
                );
            }
            let _ = writeln!(
                svg,
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"/>",
                path.trim_end(),
                color
            );
        }
        for (x, y, lo, hi) in &s.line {
            if !positive(*x, spec.x_scale) || !positive(*y, spec.y_scale) {
                continue;
            }
            let (cx, cy) = (to_x(*x), to_y(*y));
            if *hi > *lo {
                let lo_v = if positive(*lo, spec.y_scale) && *lo > 0.0 {
                    *lo
                } else {
                    y_lo
                };
                let _ = writeln!(
                    svg,
                    "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"{3}\" stroke-width=\"1\"/>",
                    fmt_px(cx),
                    fmt_px(to_y(lo_v)),
                    fmt_px(to_y(*hi)),
                    color
                );
            }
            let _ = writeln!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>",
                fmt_px(cx),
                fmt_px(cy),
                color
            );
        }
        for (x, y) in &s.dots {
            if !positive(*x, spec.x_scale) || !positive(*y, spec.y_scale) {
                continue;
            }
            let _ = writeln!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"1.8\" fill=\"{}\" fill-opacity=\"0.45\"/>",
                fmt_px(to_x(*x)),
                fmt_px(to_y(*y)),
                color
            );
        }
        if let Some(t) = spec.threshold {
            for bad in &s.bads {
                let (cx, cy) = (to_x(*bad), to_y(t));
                let _ = writeln!(
                    svg,
                    "<path d=\"M{} {} l6,6 l-6,6 l-6,-6 z\" fill=\"{}\" stroke=\"#000000\"/>",
                    fmt_px(cx),
                    fmt_px(cy - 6.0),
                    color
                );
            }
        }
        // Legend entry.
        let ly = mt + 10.0 + si as f64 * 20.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>",
            fmt_px(ml + pw + 14.0),
            fmt_px(ly),
            fmt_px(ml + pw + 38.0),
            color
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" fill=\"#000000\">{}</text>",
            fmt_px(ml + pw + 44.0),
            fmt_px(ly + 4.0),
            xml_escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write a curves SVG to a file.
pub fn emit_curves(
    points: &[SweepPoint],
    boundaries: &[BadBoundary],
    spec: &CurveSpec,
    path: &std::path::Path,
) -> Result<()> {
    let svg = render_curves(points, boundaries, spec)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path.display().to_string(), e))
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn expand_range(lo: f64, hi: f64, scale: AxisScale) -> (f64, f64) {
    match scale {
        AxisScale::Log => {
            let (lo, hi) = if lo == hi { (lo / 2.0, hi * 2.0) } else { (lo, hi) };
            (lo / 1.3, hi * 1.3)
        }
        AxisScale::Linear => {
            let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
            (lo - span * 0.08, hi + span * 0.08)
        }
    }
}

fn ticks(lo: f64, hi: f64, scale: AxisScale) -> Vec<(f64, String)> {
    match scale {
        AxisScale::Log => {
            let mut out = Vec::new();
            let mut decade = lo.log10().floor() as i32;
            while f64::powi(10.0, decade) <= hi {
                let v = f64::powi(10.0, decade);
                if v >= lo {
                    out.push((v, format!("1e{decade}")));
                }
                for m in [2.0, 5.0] {
                    let mv = v * m;
                    if mv >= lo && mv <= hi {
                        out.push((mv, format!("{}e{decade}", m as u32)));
                    }
                }
                decade += 1;
            }
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
            out
        }
        AxisScale::Linear => {
            let span = hi - lo;
            let step = f64::powf(10.0, span.log10().floor());
            let step = if span / step > 5.0 { step * 2.0 } else { step / 2.0 };
            let mut out = Vec::new();
            let mut v = (lo / step).ceil() * step;
            while v <= hi {
                out.push((v, fmt_value(v)));
                v += step;
            }
            out
        }
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{wilson_interval, PointDefect};
    use crate::lattice::build_lattice;
    use crate::noise::{apply_defects, homogeneous_profile};

    fn point(d: u32, p: f64, eps: f64) -> SweepPoint {
        let trials = 300_000u64;
        let errors = (eps * trials as f64).round() as u64;
        let (ci_lo, ci_hi) = wilson_interval(errors, trials);
        SweepPoint {
            d,
            noise: PointNoise::Homogeneous { p },
            defect: None,
            shots: 100_000,
            rounds: 3,
            errors,
            eps_round: eps,
            ci_lo,
            ci_hi,
            seed: 0,
        }
    }

    #[test]
    fn heatmap_is_deterministic_with_expected_glyphs() {
        let lat = build_lattice(5).unwrap();
        let prof = homogeneous_profile(&lat, 0.001).unwrap();
        let a = render_heatmap(&prof, &lat, "uniform").unwrap();
        let b = render_heatmap(&prof, &lat, "uniform").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches(">+</text>").count(), 25);
        assert_eq!(a.matches(">X</text>").count(), 24);
        // Uniform rates map every cell to the same mid-ramp color.
        let mid = rgb(viridis(0.5));
        assert!(a.matches(&format!("fill=\"{mid}\"")).count() >= 49);
    }

    #[test]
    fn heatmap_hot_cell_for_defect() {
        let lat = build_lattice(5).unwrap();
        let base = homogeneous_profile(&lat, 0.001).unwrap();
        let prof = apply_defects(
            &base,
            &lat,
            &[(crate::lattice::LocationSpec::Keyword("center data".into()), 0.05)],
        )
        .unwrap();
        let svg = render_heatmap(&prof, &lat, "defect").unwrap();
        // Exactly one cell at the top of the ramp.
        let hot = rgb(viridis(1.0));
        assert_eq!(svg.matches(&format!("fill=\"{hot}\"")).count(), 1);
        assert!(svg.contains("p=0.05"));
    }

    #[test]
    fn curves_render_threshold_and_bad_markers() {
        let points = vec![
            point(3, 0.001, 0.002),
            point(3, 0.003, 0.008),
            point(5, 0.001, 0.0004),
            point(5, 0.003, 0.004),
            point(5, 0.01, 0.03),
        ];
        let bads = crate::experiment::compute_bads(&points, 0.0057).unwrap();
        let spec = CurveSpec::default();
        let svg = render_curves(&points, &bads, &spec).unwrap();
        assert!(svg.contains("eps_thr=0.0057"));
        assert!(svg.contains("d=3"));
        assert!(svg.contains("d=5"));
        // Both series cross somewhere in range: two diamond markers.
        assert_eq!(svg.matches("l6,6 l-6,6").count(), 2);
        // Determinism.
        assert_eq!(svg, render_curves(&points, &bads, &spec).unwrap());
    }

    #[test]
    fn curves_skip_bad_marker_when_not_crossed() {
        let points = vec![point(3, 0.001, 0.02), point(3, 0.01, 0.1)];
        let bads = crate::experiment::compute_bads(&points, 0.0057).unwrap();
        let svg = render_curves(&points, &bads, &CurveSpec::default()).unwrap();
        assert_eq!(svg.matches("l6,6 l-6,6").count(), 0);
    }

    #[test]
    fn single_point_degenerate_plot() {
        let points = vec![point(3, 0.001, 0.002)];
        let svg = render_curves(&points, &[], &CurveSpec::default()).unwrap();
        assert!(svg.contains("circle"));
        assert!(!svg.contains("<path d=\"M"));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(render_curves(&[], &[], &CurveSpec::default()).is_err());
    }

    #[test]
    fn defect_series_labels() {
        let mut a = point(3, 0.001, 0.002);
        a.defect = Some(PointDefect {
            location: "center data".into(),
            p_def: 0.75,
        });
        let b = point(3, 0.001, 0.001);
        let svg = render_curves(&[a, b], &[], &CurveSpec::default()).unwrap();
        assert!(svg.contains("p_def=0.75"));
        assert!(svg.contains("no defect"));
    }
}
