//! Self-contained SVG plot of wavenumber branches against θ.

use std::f64::consts::PI;
use std::fmt::Write;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

const W: f64 = 820.0;
const H: f64 = 520.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// One polyline, coloured by `id`.
pub struct Series {
    pub id: usize,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub k_max: f64,
    /// Vertical rules inside `(0, 2π)`.
    pub boundaries: Vec<f64>,
    /// Labels centred in each segment between rules.
    pub segment_labels: Vec<String>,
    /// θ tick spacing (`π/3` or `π/2`), with its denominator for labels.
    pub tick_denominator: u32,
    pub series: Vec<Series>,
}

fn x(theta: f64) -> f64 {
    LEFT + theta / (2.0 * PI) * (W - LEFT - RIGHT)
}

fn y(k: f64, k_max: f64) -> f64 {
    H - BOTTOM - k / k_max * (H - TOP - BOTTOM)
}

fn pi_label(num: u32, den: u32) -> String {
    let g = gcd(num, den);
    let (n, d) = (num / g, den / g);
    match (n, d) {
        (0, _) => "0".into(),
        (1, 1) => "π".into(),
        (n, 1) => format!("{n}π"),
        (1, d) => format!("π/{d}"),
        (n, d) => format!("{n}π/{d}"),
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a.max(1) } else { gcd(b, a % b) }
}

/// Largest of 1, 2, 5 × 10ⁿ giving at most eight k ticks.
fn k_step(k_max: f64) -> f64 {
    let raw = k_max / 8.0;
    let p = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * p).find(|s| *s >= raw).unwrap_or(10.0 * p)
}

pub fn render(p: &Plot) -> String {
    let mut s = String::new();
    let (x0, x1) = (x(0.0), x(2.0 * PI));
    let (y0, y1) = (y(0.0, p.k_max), y(p.k_max, p.k_max));
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(&p.title));
    let _ = writeln!(s, r#"<defs><clipPath id="frame"><rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}"/></clipPath></defs>"#, x1 - x0, y0 - y1);

    // Axes and ticks.
    let _ = writeln!(s, r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    let den = p.tick_denominator.max(1);
    for i in 0..=2 * den {
        let xt = x(i as f64 * PI / den as f64);
        let _ = writeln!(s, r#"<line x1="{xt:.1}" y1="{y0:.1}" x2="{xt:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{xt:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, y0 + 18.0, pi_label(i, den));
    }
    let step = k_step(p.k_max);
    let mut k = 0.0;
    while k <= p.k_max * (1.0 + 1e-9) {
        let yt = y(k, p.k_max);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{yt:.1}" x2="{x0:.1}" y2="{yt:.1}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 8.0, yt + 4.0, trim_num(k));
        k += step;
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">θ</text>"#, (x0 + x1) / 2.0, H - 12.0);
    let _ = writeln!(s, r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">k</text>"#, (y0 + y1) / 2.0, (y0 + y1) / 2.0);

    // Segment rules and labels.
    for b in &p.boundaries {
        let xb = x(*b);
        let _ = writeln!(s, r##"<line x1="{xb:.1}" y1="{y0:.1}" x2="{xb:.1}" y2="{y1:.1}" stroke="#999" stroke-dasharray="4 3"/>"##);
    }
    let mut edges = vec![0.0];
    edges.extend(&p.boundaries);
    edges.push(2.0 * PI);
    for (label, w) in p.segment_labels.iter().zip(edges.windows(2)) {
        let _ = writeln!(s, r##"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="#555">{}</text>"##, x((w[0] + w[1]) / 2.0), y1 + 14.0, escape(label));
    }

    // Branches.
    let _ = writeln!(s, r#"<g clip-path="url(#frame)" fill="none" stroke-width="1.4">"#);
    for series in &p.series {
        if series.points.is_empty() {
            continue;
        }
        let colour = PALETTE[series.id % PALETTE.len()];
        let pts: Vec<String> = series.points.iter().map(|(t, k)| format!("{:.2},{:.2}", x(*t), y(*k, p.k_max))).collect();
        let _ = writeln!(s, r#"<polyline stroke="{colour}" points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn trim_num(v: f64) -> String {
    let t = format!("{v:.3}");
    t.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
