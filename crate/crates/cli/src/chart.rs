//! Self-contained SVG bar and line charts.
//!
//! Coordinates are printed with two decimals so the same data always gives
//! the same bytes.

use std::fmt::Write;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 110.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Maps values onto the plot's vertical extent; zero is always inside the range.
struct YScale {
    lo: f64,
    hi: f64,
}

impl YScale {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo == hi {
            hi = lo + 1.0;
        }
        YScale { lo, hi }
    }

    fn y(&self, v: f64) -> f64 {
        let plot = HEIGHT - TOP - BOTTOM;
        TOP + (self.hi - v) / (self.hi - self.lo) * plot
    }
}

fn header(svg: &mut String, title: &str, y_label: &str, scale: &YScale) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        escape(y_label)
    );
    let zero = scale.y(0.0);
    let _ = writeln!(
        svg,
        r##"<line class="zero" x1="{LEFT:.2}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="#444"/>"##,
        WIDTH - RIGHT
    );
    for v in [scale.lo, scale.hi] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            scale.y(v) + 4.0,
            helix_core::format_sig(v, 4)
        );
    }
}

/// One bar per entry, left to right in the given order.
pub fn bar_chart(title: &str, y_label: &str, bars: &[(String, f64)]) -> String {
    let scale = YScale::new(bars.iter().map(|b| b.1));
    let mut svg = String::new();
    header(&mut svg, title, y_label, &scale);
    let slot = (WIDTH - LEFT - RIGHT) / bars.len().max(1) as f64;
    let zero = scale.y(0.0);
    for (n, (label, v)) in bars.iter().enumerate() {
        let x = LEFT + slot * n as f64 + slot * 0.15;
        let y = scale.y(*v);
        let (top, h) = if y < zero { (y, zero - y) } else { (zero, y - zero) };
        let _ = writeln!(
            svg,
            r##"<rect class="bar" x="{x:.2}" y="{top:.2}" width="{:.2}" height="{h:.2}" fill="#1f77b4"><title>{}: {}</title></rect>"##,
            slot * 0.7,
            escape(label),
            helix_core::format_sig(*v, 4)
        );
        let cx = x + slot * 0.35;
        let ly = HEIGHT - BOTTOM + 12.0;
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{ly:.2}" text-anchor="end" transform="rotate(-60 {cx:.2} {ly:.2})">{}</text>"#,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One polyline per series over shared x labels. A `None` breaks the line.
pub fn line_chart(title: &str, y_label: &str, x_labels: &[String], series: &[(String, Vec<Option<f64>>)]) -> String {
    let scale = YScale::new(series.iter().flat_map(|s| s.1.iter().flatten().copied()));
    let mut svg = String::new();
    header(&mut svg, title, y_label, &scale);
    let n = x_labels.len().max(1);
    let step = (WIDTH - LEFT - RIGHT) / n as f64;
    let x = |i: usize| LEFT + step * (i as f64 + 0.5);
    for (i, label) in x_labels.iter().enumerate() {
        let ly = HEIGHT - BOTTOM + 12.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" text-anchor="end" transform="rotate(-45 {:.2} {ly:.2})">{}</text>"#,
            x(i),
            x(i),
            escape(label)
        );
    }
    for (k, (name, values)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, svg: &mut String| {
            if !run.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<polyline class="series" fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
                    run.join(" ")
                );
                run.clear();
            }
        };
        for (i, v) in values.iter().enumerate() {
            match v {
                Some(v) => {
                    let (px, py) = (x(i), scale.y(*v));
                    run.push(format!("{px:.2},{py:.2}"));
                    let _ = writeln!(svg, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="{colour}"/>"#);
                }
                None => flush(&mut run, &mut svg),
            }
        }
        flush(&mut run, &mut svg);
        let ly = TOP + 14.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" fill="{colour}" text-anchor="end">{}</text>"#,
            WIDTH - RIGHT,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
