use std::fmt::Write as _;
use std::path::Path;

use super::{HarnessError, SlowdownTable, SweepMode};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
];

/// Renders `table` as a standalone SVG line chart: one series per column,
/// sweep value on the x axis (log2 scale for bandwidth), normalised time on
/// the y axis.
pub fn render_svg(table: &SlowdownTable) -> String {
    let log = table.mode == SweepMode::Bandwidth;
    let xv = |v: u64| if log { (v.max(1) as f64).log2() } else { v as f64 };
    let (x0, x1) = table
        .rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(xv(v)), hi.max(xv(v)))
        });
    let span = if x1 > x0 { x1 - x0 } else { 1.0 };
    let ymax = table.cells.iter().flatten().fold(1.0f64, |m, &c| m.max(c)) * 1.05;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: u64| LEFT + (xv(v) - x0) / span * plot_w;
    let py = |y: f64| TOP + plot_h - y / ymax * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let title = match table.mode {
        SweepMode::Latency => "Slowdown vs extra memory latency",
        SweepMode::Bandwidth => "Normalized time vs bandwidth limit",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="18" text-anchor="middle" font-size="13">{title}</text>"#,
        LEFT + plot_w / 2.0
    );
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT:.1},{TOP:.1} V{:.1} H{:.1}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    for &v in &table.rows {
        let x = px(v);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{v}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 4.0,
            TOP + plot_h + 16.0
        );
    }
    for i in 0..=5 {
        let y = ymax * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{0:.1}" x2="{:.1}" y2="{0:.1}" stroke="#dddddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{y:.2}</text>"##,
            py(y),
            LEFT + plot_w,
            LEFT - 6.0,
            py(y) + 4.0
        );
    }
    let xlabel = match table.mode {
        SweepMode::Latency => "extra latency (cycles)",
        SweepMode::Bandwidth => "bandwidth (B/cycle, log scale)",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xlabel}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16,{:.1}) rotate(-90)" text-anchor="middle">normalized execution time</text>"#,
        TOP + plot_h / 2.0
    );
    for (c, imp) in table.columns.iter().enumerate() {
        let color = COLORS[c % COLORS.len()];
        let points: Vec<String> = table
            .rows
            .iter()
            .zip(&table.cells)
            .map(|(&v, row)| format!("{:.1},{:.1}", px(v), py(row[c])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        let ly = TOP + 14.0 * c as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{imp}</text>"#,
            lx + 18.0,
            lx + 24.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes [`render_svg`] output to `path`.
pub fn emit_plot(table: &SlowdownTable, path: &Path) -> Result<(), HarnessError> {
    if table.rows.is_empty() || table.columns.is_empty() {
        return Err(HarnessError::Config("cannot plot an empty table".into()));
    }
    std::fs::write(path, render_svg(table)).map_err(|e| HarnessError::io(path, e))
}
