//! Horizontal box plot of rank distributions, one row per parser.

use std::fmt::Write;

use subsetbench_core::ranking::BoxStats;

const ROW: f64 = 22.0;
const LEFT: f64 = 160.0;
const PLOT_WIDTH: f64 = 600.0;
const TOP: f64 = 30.0;

pub fn boxplot(title: &str, boxes: &[(String, BoxStats<f64>)], max_rank: usize) -> String {
    let max_rank = max_rank.max(2) as f64;
    let x = |rank: f64| LEFT + (rank - 1.0) / (max_rank - 1.0) * PLOT_WIDTH;
    let height = TOP + ROW * boxes.len() as f64 + 40.0;
    let width = LEFT + PLOT_WIDTH + 30.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, LEFT + PLOT_WIDTH / 2.0, escape(title));
    for (i, (parser, b)) in boxes.iter().enumerate() {
        let y = TOP + ROW * i as f64;
        let mid = y + ROW / 2.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LEFT - 8.0, mid + 4.0, escape(parser));
        let (wl, wh) = (x(b.whisker_low as f64), x(b.whisker_high as f64));
        let _ = writeln!(s, r#"<line x1="{wl}" y1="{mid}" x2="{wh}" y2="{mid}" stroke="black"/>"#);
        for w in [wl, wh] {
            let _ = writeln!(s, r#"<line x1="{w}" y1="{}" x2="{w}" y2="{}" stroke="black"/>"#, y + 6.0, y + ROW - 6.0);
        }
        let (q1, q3) = (x(b.q1), x(b.q3));
        let _ = writeln!(
            s,
            r#"<rect x="{q1}" y="{}" width="{}" height="{}" fill="lightsteelblue" stroke="black"/>"#,
            y + 3.0,
            (q3 - q1).max(1.0),
            ROW - 6.0
        );
        let m = x(b.median);
        let _ = writeln!(s, r#"<line x1="{m}" y1="{}" x2="{m}" y2="{}" stroke="black" stroke-width="2"/>"#, y + 3.0, y + ROW - 3.0);
        for &o in &b.outliers {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{mid}" r="2.5" fill="none" stroke="black"/>"#, x(o as f64));
        }
    }
    let axis_y = TOP + ROW * boxes.len() as f64 + 6.0;
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#, LEFT + PLOT_WIDTH);
    for r in 1..=max_rank as usize {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{r}</text>"#, x(r as f64), axis_y + 14.0);
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
