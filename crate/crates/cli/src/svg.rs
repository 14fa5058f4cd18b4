//! Minimal standalone SVG line plots and heatmaps.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Round tick step (1, 2 or 5 × 10^k) giving about `target` intervals.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let m = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo, 6.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        for t in ticks(self.x.0, self.x.1) {
            let p = self.px(t);
            let _ = writeln!(out, r#"<line x1="{p:.1}" y1="{y0:.1}" x2="{p:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 5.0);
            let _ = writeln!(out, r#"<text x="{p:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, y0 + 19.0, fmt_tick(t));
        }
        for t in ticks(self.y.0, self.y.1) {
            let p = self.py(t);
            let _ = writeln!(out, r#"<line x1="{:.1}" y1="{p:.1}" x2="{x0:.1}" y2="{p:.1}" stroke="black"/>"#, x0 - 5.0);
            let _ = writeln!(
                out,
                r##"<line x1="{x0:.1}" y1="{p:.1}" x2="{x1:.1}" y2="{p:.1}" stroke="#dddddd" stroke-width="0.5"/>"##
            );
            let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 8.0, p + 4.0, fmt_tick(t));
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 15.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(y_label)
        );
    }
}

fn fmt_tick(t: f64) -> String {
    if t == 0.0 {
        "0".to_string()
    } else if t.abs() >= 1e5 || t.abs() < 1e-3 {
        format!("{t:.1e}")
    } else {
        let s = format!("{t:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let frame = Frame {
        x: bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0))),
        y: bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1))),
    };
    let mut out = String::new();
    header(&mut out, title);
    frame.axes(&mut out, x_label, y_label);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut path = String::new();
        for &(x, y) in &s.points {
            let _ = write!(path, "{:.2},{:.2} ", frame.px(x), frame.py(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.trim_end()
        );
        let ly = TOP + 16.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    out
}

/// Perceptually ordered dark-blue → yellow ramp.
fn color(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = t.clamp(0.0, 1.0);
    let k = STOPS.iter().rposition(|s| s.0 <= t).unwrap_or(0).min(STOPS.len() - 2);
    let (t0, c0) = STOPS[k];
    let (t1, c1) = STOPS[k + 1];
    let f = (t - t0) / (t1 - t0);
    let ch = |i: usize| (c0[i] + f * (c1[i] - c0[i])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
}

/// Heatmap of row-major `values` (one row per `ys` entry). Large grids are
/// subsampled to at most `MAX_CELLS` cells per axis.
pub fn heatmap(title: &str, xs: &[f64], ys: &[f64], values: &[f64]) -> String {
    const MAX_CELLS: usize = 121;
    let (nx, ny) = (xs.len(), ys.len());
    let stride_x = nx.div_ceil(MAX_CELLS).max(1);
    let stride_y = ny.div_ceil(MAX_CELLS).max(1);
    let frame = Frame {
        x: (xs[0], xs[nx - 1]),
        y: (ys[0], ys[ny - 1]),
    };
    let peak = values.iter().copied().fold(0.0, f64::max);
    let mut out = String::new();
    header(&mut out, title);
    let cols: Vec<usize> = (0..nx).step_by(stride_x).collect();
    let rows: Vec<usize> = (0..ny).step_by(stride_y).collect();
    let cell = |idx: &[usize], k: usize, coords: &[f64]| {
        let lo = if k == 0 { coords[idx[0]] } else { 0.5 * (coords[idx[k - 1]] + coords[idx[k]]) };
        let hi = if k + 1 == idx.len() {
            coords[*idx.last().expect("non-empty")]
        } else {
            0.5 * (coords[idx[k]] + coords[idx[k + 1]])
        };
        (lo, hi)
    };
    for (ry, &iy) in rows.iter().enumerate() {
        let (y_lo, y_hi) = cell(&rows, ry, ys);
        for (rx, &ix) in cols.iter().enumerate() {
            let (x_lo, x_hi) = cell(&cols, rx, xs);
            let v = values[iy * nx + ix];
            let t = if peak > 0.0 { v / peak } else { 0.0 };
            let (px0, px1) = (frame.px(x_lo), frame.px(x_hi));
            let (py0, py1) = (frame.py(y_hi), frame.py(y_lo));
            let _ = writeln!(
                out,
                r#"<rect x="{px0:.2}" y="{py0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                px1 - px0 + 0.3,
                py1 - py0 + 0.3,
                color(t)
            );
        }
    }
    frame.axes(&mut out, "x (Bohr)", "y (Bohr)");
    let bar_x = WIDTH - RIGHT + 20.0;
    let (top, bottom) = (TOP, HEIGHT - BOTTOM);
    for k in 0..50 {
        let t = k as f64 / 49.0;
        let y = bottom - t * (bottom - top);
        let _ = writeln!(
            out,
            r#"<rect x="{bar_x:.1}" y="{:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            y - (bottom - top) / 49.0,
            (bottom - top) / 49.0 + 0.3,
            color(t)
        );
    }
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, bar_x + 24.0, top + 10.0, fmt_tick(peak));
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">0</text>"#, bar_x + 24.0, bottom);
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">|ψ|² (1/Bohr²)</text>"#, bar_x - 4.0, top - 8.0);
    out.push_str("</svg>\n");
    out
}
