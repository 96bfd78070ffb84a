//! Static SVG line plots drawn from the same numbers as the CSV tables.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 78.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-300 {
            let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
            lo -= pad;
            hi += pad;
        } else {
            let pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Self { log, lo, hi }
    }

    fn transform(&self, v: f64) -> Option<f64> {
        if self.log {
            (v > 0.0).then(|| v.log10())
        } else {
            v.is_finite().then_some(v)
        }
    }

    /// Fraction of the axis length for a transformed value.
    fn frac(&self, t: f64) -> f64 {
        (t - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i64, self.hi.floor() as i64);
            if b >= a {
                let step = ((b - a) / 6 + 1) as usize;
                return (a..=b).step_by(step).map(|e| (e as f64, format!("1e{e}"))).collect();
            }
            return [self.lo, self.hi].iter().map(|&t| (t, format!("{:.2e}", 10f64.powf(t)))).collect();
        }
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last)
            .map(|i| {
                let v = i as f64 * step;
                let label = if step >= 1.0 && v.abs() < 1e6 { format!("{v:.0}") } else { format!("{v:.3e}") };
                (v, label)
            })
            .collect()
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x: false,
            log_y: false,
            series: vec![],
        }
    }

    pub fn log_log(mut self) -> Self {
        self.log_x = true;
        self.log_y = true;
        self
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn with(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }

    pub fn to_svg(&self) -> String {
        let x = Axis::fit(self.all(|p| p.0, self.log_x), self.log_x);
        let y = Axis::fit(self.all(|p| p.1, self.log_y), self.log_y);
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let px = |t: f64| LEFT + x.frac(t) * pw;
        let py = |t: f64| TOP + (1.0 - y.frac(t)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
            LEFT + pw / 2.0,
            esc(&self.title)
        );
        let _ = writeln!(s, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);
        for (t, label) in x.ticks() {
            let xx = px(t);
            let _ = writeln!(
                s,
                r##"<line x1="{xx:.2}" y1="{}" x2="{xx:.2}" y2="{}" stroke="#333"/>"##,
                TOP + ph,
                TOP + ph + 4.0
            );
            let _ =
                writeln!(s, r#"<text x="{xx:.2}" y="{}" text-anchor="middle">{}</text>"#, TOP + ph + 16.0, esc(&label));
        }
        for (t, label) in y.ticks() {
            let yy = py(t);
            let _ = writeln!(s, r##"<line x1="{}" y1="{yy:.2}" x2="{LEFT}" y2="{yy:.2}" stroke="#333"/>"##, LEFT - 4.0);
            let _ =
                writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, yy + 4.0, esc(&label));
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 12.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            TOP + ph / 2.0,
            esc(&self.y_label)
        );
        for (i, series) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<(f64, f64)> =
                series.points.iter().filter_map(|&(a, b)| Some((px(x.transform(a)?), py(y.transform(b)?)))).collect();
            let path: Vec<String> = pts.iter().map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
            if pts.len() <= 40 {
                for (a, b) in &pts {
                    let _ = writeln!(s, r#"<circle cx="{a:.2}" cy="{b:.2}" r="2.5" fill="{color}"/>"#);
                }
            }
            let ly = TOP + 14.0 + 16.0 * i as f64;
            let lx = WIDTH - RIGHT + 10.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                lx + 18.0
            );
            let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 22.0, ly + 4.0, esc(&series.label));
        }
        s.push_str("</svg>\n");
        s
    }

    fn all<'a>(&'a self, pick: fn(&(f64, f64)) -> f64, log: bool) -> impl Iterator<Item = f64> + 'a {
        let axis = Axis { log, lo: 0.0, hi: 1.0 };
        self.series.iter().flat_map(|s| s.points.iter()).filter_map(move |p| axis.transform(pick(p)))
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
