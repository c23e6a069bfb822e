//! Minimal hand-written SVG charts. Coordinates are printed with fixed
//! precision so identical inputs give identical bytes.

use std::fmt::Write;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn open(width: f64, height: f64, title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="16" text-anchor="middle" font-size="13">{}</text>"#,
        width / 2.0,
        escape(title)
    )
    .unwrap();
    s
}

/// Diverging blue-white-red colour for `v` in [-1, 1].
fn diverging(v: f64) -> String {
    let t = v.clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        (255.0 - 200.0 * t, 255.0 - 150.0 * t, 255.0)
    } else {
        (255.0, 255.0 + 150.0 * t, 255.0 + 200.0 * t)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        r.round() as u8,
        g.round() as u8,
        b.round() as u8
    )
}

/// Square heatmap; `None` cells are drawn grey without a label.
pub fn heatmap(title: &str, labels: &[String], cells: &[Vec<Option<f64>>]) -> String {
    let cell = 48.0;
    let margin = 110.0;
    let n = labels.len() as f64;
    let mut s = open(margin + n * cell + 20.0, margin + n * cell + 20.0, title);
    for (i, row) in cells.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let (x, y) = (margin + j as f64 * cell, margin + i as f64 * cell);
            let fill = v.map_or_else(|| "#cccccc".to_string(), diverging);
            writeln!(s, r#"<rect x="{x:.1}" y="{y:.1}" width="{cell:.1}" height="{cell:.1}" fill="{fill}" stroke="white"/>"#).unwrap();
            if let Some(v) = v {
                writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{v:.2}</text>"#,
                    x + cell / 2.0,
                    y + cell / 2.0 + 4.0
                )
                .unwrap();
            }
        }
    }
    for (k, l) in labels.iter().enumerate() {
        let c = margin + k as f64 * cell + cell / 2.0;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{c:.1}" text-anchor="end">{}</text>"#,
            margin - 6.0,
            escape(l)
        )
        .unwrap();
        writeln!(s, r#"<text x="{c:.1}" y="{:.1}" text-anchor="start" transform="rotate(-45 {c:.1} {:.1})">{}</text>"#, margin - 6.0, margin - 6.0, escape(l))
            .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub struct Series {
    pub label: String,
    /// `(x, mean, low, high)` points in increasing x.
    pub points: Vec<(f64, f64, f64, f64)>,
}

/// Line plot with a shaded confidence band per series, y fixed to [-1, 1].
pub fn line_plot(title: &str, x_label: &str, series: &[Series]) -> String {
    let (w, h, left, top, plot_w, plot_h) = (560.0, 360.0, 60.0, 30.0, 440.0, 280.0);
    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let (x0, x1) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let span = if x1 > x0 { x1 - x0 } else { 1.0 };
    let px = |x: f64| left + (x - x0) / span * plot_w;
    let py = |y: f64| top + (1.0 - (y.clamp(-1.0, 1.0) + 1.0) / 2.0) * plot_h;
    let mut s = open(w, h, title);
    writeln!(s, r#"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#).unwrap();
    for y in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        writeln!(
            s,
            r##"<line x1="{left}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="#eeeeee"/>"##,
            left + plot_w,
            py(y),
            py(y)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.1}</text>"#,
            left - 4.0,
            py(y) + 4.0
        )
        .unwrap();
    }
    let mut ticks: Vec<f64> = xs.clone();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for x in ticks {
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#,
            px(x),
            top + plot_h + 14.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        left + plot_w / 2.0,
        h - 14.0,
        escape(x_label)
    )
    .unwrap();
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    for (k, se) in series.iter().enumerate() {
        let c = colors[k % colors.len()];
        let pts: Vec<_> = se.points.iter().filter(|p| p.1.is_finite()).collect();
        if pts.is_empty() {
            continue;
        }
        let upper: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.1},{:.1}", px(p.0), py(p.3)))
            .collect();
        let lower: Vec<String> = pts
            .iter()
            .rev()
            .map(|p| format!("{:.1},{:.1}", px(p.0), py(p.2)))
            .collect();
        writeln!(
            s,
            r#"<polygon points="{} {}" fill="{c}" fill-opacity="0.2" stroke="none"/>"#,
            upper.join(" "),
            lower.join(" ")
        )
        .unwrap();
        let line: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.1},{:.1}", px(p.0), py(p.1)))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#,
            line.join(" ")
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{c}">{}</text>"#,
            left + plot_w + 8.0,
            top + 14.0 + 16.0 * k as f64,
            escape(&se.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Five-number summary used for boxes: (min, q1, median, q3, max).
pub type Box5 = (f64, f64, f64, f64, f64);

/// Horizontal boxplots, one row per group, on a shared axis `[lo, hi]`.
pub fn boxplot(title: &str, x_label: &str, groups: &[(String, Box5)], lo: f64, hi: f64) -> String {
    let (left, top, plot_w, row) = (110.0, 30.0, 400.0, 26.0);
    let plot_h = row * groups.len().max(1) as f64;
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = |x: f64| left + (x - lo) / span * plot_w;
    let mut s = open(left + plot_w + 30.0, top + plot_h + 50.0, title);
    writeln!(s, r#"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h:.1}" fill="none" stroke="black"/>"#).unwrap();
    for k in 0..=4 {
        let x = lo + span * k as f64 / 4.0;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x:.2}</text>"#,
            px(x),
            top + plot_h + 14.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        left + plot_w / 2.0,
        top + plot_h + 34.0,
        escape(x_label)
    )
    .unwrap();
    for (i, (label, (mn, q1, md, q3, mx))) in groups.iter().enumerate() {
        let y = top + row * i as f64 + row / 2.0;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 6.0,
            y + 4.0,
            escape(label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<line x1="{:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="black"/>"#,
            px(*mn),
            px(*mx)
        )
        .unwrap();
        writeln!(
            s,
            r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="#9ecae1" stroke="black"/>"##,
            px(*q1),
            y - row / 3.0,
            (px(*q3) - px(*q1)).max(1.0),
            row * 2.0 / 3.0
        )
        .unwrap();
        writeln!(s, r#"<line x1="{:.1}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#, px(*md), px(*md), y - row / 3.0, y + row / 3.0)
            .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
