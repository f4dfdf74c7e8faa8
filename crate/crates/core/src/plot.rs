//! Minimal SVG charts.
//!
//! Every plotted point carries its raw values in `data-x` / `data-y`
//! attributes, formatted exactly like the CSV written next to the figure.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesKind {
    Line,
    /// Red dots on top of other series.
    Markers,
    /// Histogram bars; x is the left bin edge.
    Bars { width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub kind: SeriesKind,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, kind: SeriesKind, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            kind,
            points,
        }
    }
}

/// Dashed reference line.
#[derive(Debug, Clone, PartialEq)]
pub struct RefLine {
    pub value: f64,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub hlines: Vec<RefLine>,
    pub vlines: Vec<RefLine>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Scale {
    lo: f64,
    hi: f64,
    out_lo: f64,
    out_hi: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Self { lo, hi, out_lo, out_hi }
    }

    fn map(&self, v: f64) -> f64 {
        self.out_lo + (v - self.lo) / (self.hi - self.lo) * (self.out_hi - self.out_lo)
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

impl Chart {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = vec![0.0];
        for s in &self.series {
            for &(x, y) in &s.points {
                xs.push(x);
                ys.push(y);
                if let SeriesKind::Bars { width } = s.kind {
                    xs.push(x + width);
                }
            }
        }
        xs.extend(self.vlines.iter().map(|l| l.value));
        ys.extend(self.hlines.iter().map(|l| l.value));
        let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
        let (x0, x1) = if xs.is_empty() {
            (0.0, 1.0)
        } else {
            (fold(&xs, f64::min, f64::INFINITY), fold(&xs, f64::max, f64::NEG_INFINITY))
        };
        let y0 = fold(&ys, f64::min, f64::INFINITY);
        let y1 = fold(&ys, f64::max, f64::NEG_INFINITY);
        let pad = 0.05 * (y1 - y0).max(1e-12);
        (x0, x1, if y0 < 0.0 { y0 - pad } else { 0.0 }, y1 + pad)
    }

    pub fn to_svg(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = Scale::new(x0, x1, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let sy = Scale::new(y0, y1, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        // Axes and ticks.
        let (left, right, top, bottom) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT, MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        let _ = writeln!(
            svg,
            r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#
        );
        for t in ticks(x0, x1) {
            let px = sx.map(t);
            let _ = writeln!(
                svg,
                r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{t}</text>"#,
                bottom + 5.0,
                bottom + 18.0
            );
        }
        for t in ticks(y0, y1) {
            let py = sy.map(t);
            let _ = writeln!(
                svg,
                r#"<line x1="{}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                left - 5.0,
                left - 8.0,
                py + 4.0,
                format_tick(t)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            escape(&self.y_label)
        );

        let mut color_idx = 0;
        let bar_groups = self
            .series
            .iter()
            .filter(|s| matches!(s.kind, SeriesKind::Bars { .. }))
            .count()
            .max(1);
        let mut bar_idx = 0;
        for s in &self.series {
            let color = match s.kind {
                SeriesKind::Markers => "#d62728",
                _ => {
                    let c = PALETTE[color_idx % PALETTE.len()];
                    color_idx += 1;
                    c
                }
            };
            let _ = writeln!(svg, r#"<g class="series" data-name="{}">"#, escape(&s.name));
            match s.kind {
                SeriesKind::Line => {
                    let path: Vec<String> = s
                        .points
                        .iter()
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx.map(x), sy.map(y)))
                        .collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
                        path.join(" ")
                    );
                    for &(x, y) in &s.points {
                        let _ = writeln!(
                            svg,
                            r#"<circle class="pt" cx="{:.2}" cy="{:.2}" r="1" fill="{color}" data-x="{x}" data-y="{y}"/>"#,
                            sx.map(x),
                            sy.map(y)
                        );
                    }
                }
                SeriesKind::Markers => {
                    for &(x, y) in &s.points {
                        let _ = writeln!(
                            svg,
                            r#"<circle class="pt" cx="{:.2}" cy="{:.2}" r="4" fill="{color}" data-x="{x}" data-y="{y}"/>"#,
                            sx.map(x),
                            sy.map(y)
                        );
                    }
                }
                SeriesKind::Bars { width } => {
                    let sub = width / bar_groups as f64;
                    for &(x, y) in &s.points {
                        let bx = sx.map(x + sub * bar_idx as f64);
                        let bw = (sx.map(x + sub * (bar_idx + 1) as f64) - bx).max(0.5);
                        let by = sy.map(y);
                        let _ = writeln!(
                            svg,
                            r#"<rect class="pt" x="{bx:.2}" y="{by:.2}" width="{bw:.2}" height="{:.2}" fill="{color}" fill-opacity="0.8" data-x="{x}" data-y="{y}"/>"#,
                            (sy.map(0.0) - by).max(0.0)
                        );
                    }
                    bar_idx += 1;
                }
            }
            let _ = writeln!(svg, "</g>");
        }

        for (i, l) in self.hlines.iter().enumerate() {
            let py = sy.map(l.value);
            let _ = writeln!(
                svg,
                r#"<line class="ref" x1="{left}" y1="{py:.2}" x2="{right}" y2="{py:.2}" stroke="{}" stroke-dasharray="6,4" data-y="{}"/><text x="{}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#,
                PALETTE[(i + 1) % PALETTE.len()],
                l.value,
                right - 4.0,
                py - 4.0,
                escape(&l.label)
            );
        }
        for l in &self.vlines {
            let px = sx.map(l.value);
            let _ = writeln!(
                svg,
                r#"<line class="ref" x1="{px:.2}" y1="{top}" x2="{px:.2}" y2="{bottom}" stroke="gray" stroke-dasharray="6,4" data-x="{}"/><text x="{:.2}" y="{}" font-size="11">{}</text>"#,
                l.value,
                px + 3.0,
                top + 12.0,
                escape(&l.label)
            );
        }

        // Legend.
        let mut ly = top + 4.0;
        let mut legend_idx = 0;
        for s in &self.series {
            let color = match s.kind {
                SeriesKind::Markers => "#d62728",
                _ => {
                    let c = PALETTE[legend_idx % PALETTE.len()];
                    legend_idx += 1;
                    c
                }
            };
            let _ = writeln!(
                svg,
                r#"<rect x="{}" y="{ly}" width="10" height="10" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
                left + 10.0,
                left + 25.0,
                ly + 9.0,
                escape(&s.name)
            );
            ly += 16.0;
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn format_tick(t: f64) -> String {
    if t.abs() >= 1e4 || (t != 0.0 && t.abs() < 1e-3) {
        format!("{t:.1e}")
    } else {
        let s = format!("{t:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Extracts `(data-x, data-y)` pairs of every plotted point of the series
/// named `name`, in document order.
pub fn extract_points(svg: &str, name: &str) -> Vec<(f64, f64)> {
    let marker = format!(r#"data-name="{}""#, escape(name));
    let Some(start) = svg.find(&marker) else {
        return Vec::new();
    };
    let body = &svg[start..];
    let body = &body[..body.find("</g>").unwrap_or(body.len())];
    let attr = |line: &str, key: &str| -> Option<f64> {
        let pat = format!(r#" {key}=""#);
        let i = line.find(&pat)? + pat.len();
        let j = line[i..].find('"')? + i;
        line[i..j].parse().ok()
    };
    body.lines()
        .filter(|l| l.contains(r#"class="pt""#))
        .filter_map(|l| Some((attr(l, "data-x")?, attr(l, "data-y")?)))
        .collect()
}
