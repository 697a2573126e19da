//! Small deterministic SVG charts: polylines and scatters on an 800x600 canvas.

use std::fmt::Write as _;

use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const TICKS: usize = 6;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Line,
    Dots,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
}

impl Series {
    pub fn line(label: &str, points: Vec<(f64, f64)>) -> Series {
        Series {
            label: label.to_string(),
            points,
            mark: Mark::Line,
        }
    }

    pub fn dots(label: &str, points: Vec<(f64, f64)>) -> Series {
        Series {
            label: label.to_string(),
            points,
            mark: Mark::Dots,
        }
    }
}

/// Chart description. Horizontal bands are shaded strips `(y0, y1)`, drawn
/// under the data; reference lines are dashed horizontals.
#[derive(Debug, Clone, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub bands: Vec<(f64, f64)>,
    pub reference_lines: Vec<f64>,
}

struct Scale {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, a: f64, b: f64) -> Scale {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        Scale { lo, hi, a, b }
    }

    fn map(&self, v: f64) -> f64 {
        self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..TICKS)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (TICKS - 1) as f64)
            .collect()
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-3 && v.abs() < 1e5) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Chart {
        Chart {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            ..Chart::default()
        }
    }

    pub fn with_series(mut self, s: Series) -> Chart {
        self.series.push(s);
        self
    }

    pub fn to_svg(&self) -> Result<String> {
        let pts = self.series.iter().flat_map(|s| s.points.iter());
        if self.series.iter().all(|s| s.points.is_empty()) {
            return Err(Error::EmptySeries);
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts.filter(|p| p.0.is_finite() && p.1.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        for &y in &self.reference_lines {
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let pad = 0.04 * (y1 - y0).max(1e-12);
        let sx = Scale::new(x0, x1, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let sy = Scale::new(y0 - pad, y1 + pad, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);

        let mut o = String::new();
        let _ = writeln!(
            o,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(o, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
            escape(&self.title)
        );
        for &(a, b) in &self.bands {
            let (ya, yb) = (sy.map(a.max(sy.lo)), sy.map(b.min(sy.hi)));
            if yb < ya {
                let _ = writeln!(
                    o,
                    r##"<rect class="band" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#e8e8e8"/>"##,
                    MARGIN_LEFT,
                    yb,
                    WIDTH - MARGIN_RIGHT - MARGIN_LEFT,
                    ya - yb
                );
            }
        }
        // axes and ticks
        let (bx, by) = (MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM);
        let _ = writeln!(
            o,
            r#"<path class="axes" d="M{bx:.2},{MARGIN_TOP:.2}V{by:.2}H{:.2}" fill="none" stroke="black"/>"#,
            WIDTH - MARGIN_RIGHT
        );
        for t in sx.ticks() {
            let x = sx.map(t);
            let _ = writeln!(
                o,
                r#"<line x1="{x:.2}" y1="{by:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                by + 5.0,
                by + 20.0,
                tick_label(t)
            );
        }
        for t in sy.ticks() {
            let y = sy.map(t);
            let _ = writeln!(
                o,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{bx:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                bx - 5.0,
                bx - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            o,
            r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for &r in &self.reference_lines {
            let y = sy.map(r);
            let _ = writeln!(
                o,
                r##"<line class="reference" x1="{bx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#555" stroke-dasharray="6 4"/>"##,
                WIDTH - MARGIN_RIGHT
            );
        }
        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mapped: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| (sx.map(x), sy.map(y)))
                .collect();
            match s.mark {
                Mark::Line => {
                    let pts: Vec<String> = mapped.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        o,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                        pts.join(" ")
                    );
                }
                Mark::Dots => {
                    let _ = write!(o, r#"<g class="scatter" fill="{color}">"#);
                    for (x, y) in &mapped {
                        let _ = write!(o, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.6"/>"#);
                    }
                    let _ = writeln!(o, "</g>");
                }
            }
            let ly = MARGIN_TOP + 10.0 + 18.0 * i as f64;
            let lx = WIDTH - MARGIN_RIGHT + 12.0;
            let _ = writeln!(
                o,
                r#"<rect x="{lx:.2}" y="{:.2}" width="12" height="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                ly - 2.0,
                lx + 18.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        o.push_str("</svg>\n");
        Ok(o)
    }
}

/// One polyline per series, labelled in order.
pub fn emit_svg_linechart(series: &[Vec<(f64, f64)>], labels: &[&str]) -> Result<String> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut chart = Chart::new("", "x", "y");
    for (i, s) in series.iter().enumerate() {
        let label = labels.get(i).map(|l| l.to_string()).unwrap_or_else(|| format!("series {}", i + 1));
        chart.series.push(Series::line(&label, s.clone()));
    }
    chart.to_svg()
}

pub fn emit_svg_scatter(points: &[(f64, f64)], label: &str) -> Result<String> {
    Chart::new("", "x", "y")
        .with_series(Series::dots(label, points.to_vec()))
        .to_svg()
}
