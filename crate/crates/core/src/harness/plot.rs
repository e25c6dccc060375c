//! Minimal SVG line/scatter plots, enough for the diagnostic figures:
//! moments against λ, the tail survival curve and CDF overlays.

use std::fmt::Write as _;

use super::record::Table;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555555",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Points,
    /// Empirical CDF drawn as a staircase.
    Step,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Symmetric error bars in y.
    pub errors: Option<Vec<f64>>,
    pub style: Style,
}

impl Series {
    pub fn new(name: &str, points: Vec<(f64, f64)>, style: Style) -> Self {
        Series {
            name: name.into(),
            points,
            errors: None,
            style,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub logx: bool,
    pub logy: bool,
    pub series: Vec<Series>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Plot {
    pub fn new(title: &str, xlabel: &str, ylabel: &str) -> Self {
        Plot {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            ..Default::default()
        }
    }

    fn tx(&self, x: f64) -> f64 {
        if self.logx {
            x.log10()
        } else {
            x
        }
    }

    fn ty(&self, y: f64) -> f64 {
        if self.logy {
            y.log10()
        } else {
            y
        }
    }

    /// Data range in transformed coordinates; a unit box when nothing is
    /// plottable.
    fn range(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for s in &self.series {
            for (i, &(x, y)) in s.points.iter().enumerate() {
                let e = s.errors.as_ref().map_or(0.0, |e| e[i]);
                for yy in [y - e, y + e] {
                    let (u, v) = (self.tx(x), self.ty(yy));
                    if u.is_finite() && v.is_finite() {
                        x0 = x0.min(u);
                        x1 = x1.max(u);
                        y0 = y0.min(v);
                        y1 = y1.max(v);
                    }
                }
            }
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |a: f64, b: f64| {
            let d = if b > a {
                0.05 * (b - a)
            } else {
                0.5 * a.abs().max(1.0)
            };
            (a - d, b + d)
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        (x0, x1, y0, y1)
    }

    pub fn to_svg(&self) -> String {
        let (l, r, t, b) = MARGIN;
        let (x0, x1, y0, y1) = self.range();
        let px = |u: f64| l + (u - x0) / (x1 - x0) * (W - l - r);
        let py = |v: f64| H - b - (v - y0) / (y1 - y0) * (H - t - b);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            esc(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - l - r,
            H - t - b
        );
        for i in 0..=5 {
            let u = x0 + (x1 - x0) * i as f64 / 5.0;
            let v = y0 + (y1 - y0) * i as f64 / 5.0;
            let lab = |z: f64, log: bool| {
                if log {
                    format!("1e{z:.1}")
                } else {
                    format!("{z:.3}")
                }
            };
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                px(u),
                H - b + 16.0,
                lab(u, self.logx)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                l - 4.0,
                py(v) + 4.0,
                lab(v, self.logy)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            W / 2.0,
            H - 10.0,
            esc(&self.xlabel)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            esc(&self.ylabel)
        );
        for (k, ser) in self.series.iter().enumerate() {
            let c = COLORS[k % COLORS.len()];
            let pts: Vec<(usize, f64, f64)> = ser
                .points
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| (i, self.tx(x), self.ty(y)))
                .filter(|p| p.1.is_finite() && p.2.is_finite())
                .collect();
            match ser.style {
                Style::Points => {
                    for &(i, u, v) in &pts {
                        if let Some(e) = &ser.errors {
                            let (lo, hi) = (
                                self.ty(ser.points[i].1 - e[i]),
                                self.ty(ser.points[i].1 + e[i]),
                            );
                            if lo.is_finite() && hi.is_finite() {
                                let _ = writeln!(
                                    s,
                                    r#"<line x1="{0:.2}" x2="{0:.2}" y1="{1:.2}" y2="{2:.2}" stroke="{c}"/>"#,
                                    px(u),
                                    py(lo),
                                    py(hi)
                                );
                            }
                        }
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{c}"/>"#,
                            px(u),
                            py(v)
                        );
                    }
                }
                style => {
                    let mut d = String::new();
                    for (j, &(_, u, v)) in pts.iter().enumerate() {
                        if style == Style::Step && j > 0 {
                            let _ = write!(d, "L{:.2},{:.2} ", px(u), py(pts[j - 1].2));
                        }
                        let _ = write!(
                            d,
                            "{}{:.2},{:.2} ",
                            if j == 0 { 'M' } else { 'L' },
                            px(u),
                            py(v)
                        );
                    }
                    let dash = if style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    if !d.is_empty() {
                        let _ = writeln!(
                            s,
                            r#"<path d="{}" fill="none" stroke="{c}" stroke-width="1.5"{dash}/>"#,
                            d.trim_end()
                        );
                    }
                }
            }
            let ly = t + 16.0 + 16.0 * k as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="10" height="10" fill="{c}"/>"#,
                W - r - 170.0,
                ly - 9.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{ly}">{}</text>"#,
                W - r - 155.0,
                esc(&ser.name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn pairs(t: &Table, x: &str, y: &str) -> Vec<(f64, f64)> {
    match (t.column(x), t.column(y)) {
        (Some(a), Some(b)) => a
            .into_iter()
            .zip(b)
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .collect(),
        _ => Vec::new(),
    }
}

/// Moments against λ from a sweep table: closed form as a line, Monte
/// Carlo as points with ±1 standard error bars.
pub fn moment_plot(t: &Table) -> Plot {
    let mut p = Plot::new("moments of ψ'(1)", "λ", "E[ψ'(1)^λ]");
    p.series.push(Series::new(
        "closed form",
        pairs(t, "lambda", "exact_value"),
        Style::Line,
    ));
    if let (Some(l), Some(m), Some(e)) = (
        t.column("lambda"),
        t.column("mc_mean"),
        t.column("mc_stderr"),
    ) {
        let keep: Vec<usize> = (0..l.len())
            .filter(|&i| l[i].is_finite() && m[i].is_finite() && e[i].is_finite())
            .collect();
        let mut s = Series::new(
            "Monte Carlo",
            keep.iter().map(|&i| (l[i], m[i])).collect(),
            Style::Points,
        );
        s.errors = Some(keep.iter().map(|&i| e[i]).collect());
        p.series.push(s);
    }
    p
}

/// Log-log survival curve with the fitted power law and the predicted
/// `y^{-λ₀}` reference.
pub fn tail_plot(t: &Table) -> Plot {
    let mut p = Plot::new("tail of ψ'(1)", "y", "P[ψ'(1) > y]");
    p.logx = true;
    p.logy = true;
    p.series.push(Series::new(
        "empirical",
        pairs(t, "y", "survival"),
        Style::Points,
    ));
    p.series.push(Series::new(
        "least-squares fit",
        pairs(t, "y", "fit"),
        Style::Line,
    ));
    p.series.push(Series::new(
        "slope -λ₀",
        pairs(t, "y", "reference"),
        Style::Dashed,
    ));
    p
}

/// Empirical CDF of `x` as staircase points.
pub fn ecdf(x: &[f64]) -> Vec<(f64, f64)> {
    let mut v: Vec<f64> = x.iter().copied().filter(|v| v.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| (x, (i + 1) as f64 / n))
        .collect()
}

/// Overlay of two empirical CDFs.
pub fn ks_overlay(title: &str, a: (&str, &[f64]), b: (&str, &[f64])) -> Plot {
    let mut p = Plot::new(title, "value", "empirical CDF");
    p.series.push(Series::new(a.0, ecdf(a.1), Style::Step));
    p.series.push(Series::new(b.0, ecdf(b.1), Style::Step));
    p
}
