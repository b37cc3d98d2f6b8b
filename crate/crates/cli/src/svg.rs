//! Minimal line-plot writer: fixed 800×600 viewport, linear axes with five
//! "nice" ticks each, one polyline per series and a legend.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series<'a> {
    pub label: String,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

pub struct Plot<'a> {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series<'a>>,
}

/// Smallest of 1, 1.25, 2, 2.5, 5, 10 (times a power of ten) that is ≥ `x`.
fn nice_step(x: f64) -> f64 {
    let mag = 10f64.powf(x.log10().floor());
    let f = x / mag;
    let m = [1.0, 1.25, 2.0, 2.5, 5.0, 10.0]
        .into_iter()
        .find(|m| f <= *m * (1.0 + 1e-12))
        .unwrap_or(10.0);
    m * mag
}

/// Five evenly spaced nice ticks covering `[lo, hi]`.
pub fn ticks(lo: f64, hi: f64) -> [f64; TICKS] {
    let (lo, hi) = if hi - lo > 0.0 {
        (lo, hi)
    } else {
        let pad = lo.abs().max(1.0) * 0.5;
        (lo - pad, lo + pad)
    };
    let mut step = nice_step((hi - lo) / (TICKS - 1) as f64);
    loop {
        let start = (lo / step).floor() * step;
        if start + (TICKS - 1) as f64 * step >= hi - 1e-9 * step {
            return std::array::from_fn(|k| clean(start + k as f64 * step));
        }
        step = nice_step(step * 1.000_001);
    }
}

/// Drops floating dust like 0.30000000000000004 from tick values.
fn clean(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let digits = 12 - v.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits.clamp(0, 300));
    (v * scale).round() / scale
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extent<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

pub fn render(plot: &Plot) -> String {
    let (mut x0, mut x1) = extent(plot.series.iter().flat_map(|s| s.xs.iter()));
    let (mut y0, mut y1) = extent(plot.series.iter().flat_map(|s| s.ys.iter()));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    let xt = ticks(x0, x1);
    let yt = ticks(y0.min(0.0), y1);
    let (xmin, xmax) = (xt[0], xt[TICKS - 1]);
    let (ymin, ymax) = (yt[0], yt[TICKS - 1]);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - xmin) / (xmax - xmin) * pw;
    let py = |y: f64| TOP + ph - (y - ymin) / (ymax - ymin) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&plot.title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for &t in &xt {
        let x = px(t);
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0
        )
        .unwrap();
    }
    for &t in &yt {
        let y = py(t);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(&plot.x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&plot.y_label)
    )
    .unwrap();

    for (k, series) in plot.series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        s.push_str(r#"<polyline fill="none" stroke=""#);
        s.push_str(color);
        s.push_str(r#"" stroke-width="1.5" points=""#);
        for (j, (x, y)) in series.xs.iter().zip(series.ys).enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            if j > 0 {
                s.push(' ');
            }
            write!(s, "{:.2},{:.2}", px(*x), py(*y)).unwrap();
        }
        s.push_str("\"/>\n");
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(&series.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
