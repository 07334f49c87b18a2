use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub width: u32,
    pub height: u32,
}

impl Default for ChartOptions {
    fn default() -> Self {
        ChartOptions {
            title: String::new(),
            x_label: "checkpoint".into(),
            y_label: "accuracy".into(),
            width: 640,
            height: 400,
        }
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Tick positions on a 1-2-5 grid covering `[lo, hi]`, plus decimals to print.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw - 1e-12).unwrap();
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    ((first..=last).map(|i| i as f64 * step).collect(), decimals)
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

pub fn render_svg(series: &[Series], opts: &ChartOptions) -> Result<String> {
    if series.is_empty() {
        return Err(Error::invalid("chart needs at least one series"));
    }
    for s in series {
        if s.points.len() < 2 {
            return Err(Error::invalid(format!("series {:?} needs at least 2 points", s.name)));
        }
        if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::invalid(format!("series {:?} has non-finite values", s.name)));
        }
    }
    let pts = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = range(pts().map(|p| p.0));
    let (mut y0, mut y1) = range(pts().map(|p| p.1));
    if y0 >= 0.0 && y1 <= 1.0 {
        (y0, y1) = (0.0, 1.0);
    }

    let (w, h) = (opts.width as f64, opts.height as f64);
    let pw = w - MARGIN_LEFT - MARGIN_RIGHT;
    let ph = h - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_TOP + ph - (y - y0) / (y1 - y0) * ph;
    let bottom = MARGIN_TOP + ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if !opts.title.is_empty() {
        let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, MARGIN_LEFT + pw / 2.0, escape(&opts.title));
    }
    let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{MARGIN_LEFT}" y1="{bottom}" x2="{}" y2="{bottom}"/>"#, MARGIN_LEFT + pw);
    let _ = writeln!(s, r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{bottom}"/>"#);
    let _ = writeln!(s, "</g>");

    let (yt, yd) = ticks(y0, y1);
    let (xt, xd) = ticks(x0, x1);
    let _ = writeln!(s, r#"<g class="ticks">"#);
    for t in &yt {
        let y = sy(*t);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#, MARGIN_LEFT - 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{t:.yd$}</text>"#, MARGIN_LEFT - 7.0, y + 4.0);
    }
    for t in &xt {
        let x = sx(*t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{}" stroke="black"/>"#, bottom + 4.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{t:.xd$}</text>"#, bottom + 18.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, MARGIN_LEFT + pw / 2.0, h - 10.0, escape(&opts.x_label));
    let _ = writeln!(
        s,
        r#"<text x="15" y="{0}" text-anchor="middle" transform="rotate(-90 15 {0})">{1}</text>"#,
        MARGIN_TOP + ph / 2.0,
        escape(&opts.y_label)
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = ser.points.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, coords.join(" "));
    }

    let _ = writeln!(s, r#"<g class="legend">"#);
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let lx = MARGIN_LEFT + pw + 15.0;
        let ly = MARGIN_TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&ser.name));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_chart(series: &[Series], path: &Path, opts: &ChartOptions) -> Result<()> {
    let svg = render_svg(series, opts)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(name: &str, n: usize) -> Series {
        Series {
            name: name.into(),
            points: (0..n).map(|i| (i as f64, i as f64 / n as f64)).collect(),
        }
    }

    #[test]
    fn one_polyline_per_series() {
        let svg = render_svg(&[line("semantic", 5), line("syntactic <agr>", 5)], &ChartOptions::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("syntactic &lt;agr&gt;"));
    }

    #[test]
    fn unit_range_has_decimal_ticks() {
        let svg = render_svg(&[line("a", 3)], &ChartOptions::default()).unwrap();
        for t in ["0.0", "0.2", "0.4", "0.6", "0.8", "1.0"] {
            assert!(svg.contains(&format!(">{t}</text>")), "missing tick {t}");
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        assert!(render_svg(&[], &ChartOptions::default()).is_err());
        assert!(render_svg(&[line("a", 1)], &ChartOptions::default()).is_err());
    }

    #[test]
    fn tick_grid() {
        assert_eq!(ticks(0.0, 1.0).1, 1);
        assert_eq!(ticks(0.0, 20.0).0, vec![0.0, 5.0, 10.0, 15.0, 20.0]);
    }
}
