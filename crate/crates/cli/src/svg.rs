//! Static SVG 1.1 line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
/// Decades shown below the largest value on a log axis.
const LOG_DECADES: i32 = 8;

const COLORS: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick positions at 1, 2 or 5 × 10^k covering [lo, hi].
fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

impl Chart {
    pub fn render(&self) -> String {
        let xs = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0));
        let (mut x_lo, mut x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
            (a.min(x), b.max(x))
        });
        if !(x_lo < x_hi) {
            x_lo = if x_lo.is_finite() { x_lo - 1.0 } else { 0.0 };
            x_hi = x_lo + 2.0;
        }

        let ys: Vec<f64> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1))
            .filter(|y| y.is_finite() && (!self.log_y || *y > 0.0))
            .collect();
        let y_max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);

        // Axis in plotted units: log10(y) on a log axis.
        let (v_lo, v_hi) = if self.log_y {
            if ys.is_empty() {
                (-1.0, 0.0)
            } else {
                let hi = y_max.log10().ceil();
                let lo = y_min.log10().floor().max(hi - LOG_DECADES as f64);
                if lo < hi {
                    (lo, hi)
                } else {
                    (hi - 1.0, hi)
                }
            }
        } else if ys.is_empty() {
            (0.0, 1.0)
        } else {
            let lo = y_min.min(0.0);
            let hi = if y_max > lo { y_max * 1.05 } else { lo + 1.0 };
            (lo, hi)
        };

        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let py = |v: f64| TOP + (v_hi - v) / (v_hi - v_lo) * plot_h;
        let plotted = |y: f64| {
            if self.log_y {
                if y > 0.0 {
                    y.log10().max(v_lo)
                } else {
                    v_lo
                }
            } else {
                y
            }
        };

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#
        );
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(
            s,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape(&self.title)
        );

        // Grid and ticks.
        for x in nice_ticks(x_lo, x_hi) {
            let xp = px(x);
            let _ = writeln!(
                s,
                r##"<line x1="{xp:.2}" y1="{TOP:.2}" x2="{xp:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
                TOP + plot_h
            );
            let _ = writeln!(
                s,
                r#"<text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                TOP + plot_h + 18.0,
                tick_label(x)
            );
        }
        let y_ticks: Vec<(f64, String)> = if self.log_y {
            (v_lo as i32..=v_hi as i32)
                .map(|k| (k as f64, format!("1e{k}")))
                .collect()
        } else {
            nice_ticks(v_lo, v_hi)
                .into_iter()
                .map(|v| (v, tick_label(v)))
                .collect()
        };
        for (v, label) in y_ticks {
            let yp = py(v);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT:.2}" y1="{yp:.2}" x2="{:.2}" y2="{yp:.2}" stroke="#e0e0e0"/>"##,
                LEFT + plot_w
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
                LEFT - 6.0,
                yp + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(plotted(y))))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{}"/>"#,
                pts.join(" ")
            );
            let ly = TOP + 14.0 + 18.0 * i as f64;
            let lx = LEFT + plot_w + 14.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
                lx + 24.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 30.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
