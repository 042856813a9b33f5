//! Minimal deterministic line plot of a two-column series.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const PAD: f64 = 48.0;

/// Polyline plot of `points`; `None` values break the line.
pub fn line_plot(title: &str, points: &[(f64, Option<f64>)]) -> String {
    let finite = || {
        points
            .iter()
            .filter_map(|&(x, y)| y.filter(|y| y.is_finite()).map(|y| (x, y)))
    };
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in finite() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 < x1) {
        x1 = x0 + 1.0;
    }
    if !(y0 < y1) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * PAD);
    let sy = |y: f64| HEIGHT - PAD - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * PAD,
        HEIGHT - 2.0 * PAD
    );
    if x0.is_finite() && y0 < 0.0 && y1 > 0.0 {
        let z = sy(0.0);
        let _ = writeln!(
            s,
            r#"<line x1="{PAD}" y1="{z:.3}" x2="{:.3}" y2="{z:.3}" stroke="gray" stroke-dasharray="4"/>"#,
            WIDTH - PAD
        );
    }
    let mut segment: Vec<String> = Vec::new();
    let flush = |segment: &mut Vec<String>, s: &mut String| {
        if segment.len() > 1 {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="steelblue" points="{}"/>"#,
                segment.join(" ")
            );
        }
        segment.clear();
    };
    for &(x, y) in points {
        match y.filter(|y| y.is_finite()) {
            Some(y) => segment.push(format!("{:.3},{:.3}", sx(x), sy(y))),
            None => flush(&mut segment, &mut s),
        }
    }
    flush(&mut segment, &mut s);
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.3}" y="{y:.3}" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    if x0.is_finite() {
        label(&mut s, PAD, HEIGHT - PAD + 16.0, "start", format!("{x0:.4}"));
        label(&mut s, WIDTH - PAD, HEIGHT - PAD + 16.0, "end", format!("{x1:.4}"));
        label(&mut s, PAD - 4.0, HEIGHT - PAD, "end", format!("{y0:.3e}"));
        label(&mut s, PAD - 4.0, PAD + 4.0, "end", format!("{y1:.3e}"));
    }
    label(&mut s, WIDTH / 2.0, PAD / 2.0, "middle", escape(title));
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_split_the_line() {
        let pts = [
            (0.0, Some(1.0)),
            (1.0, Some(2.0)),
            (2.0, None),
            (3.0, Some(0.0)),
            (4.0, Some(1.0)),
        ];
        let svg = line_plot("t", &pts);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg, line_plot("t", &pts));
    }

    #[test]
    fn empty_series_is_valid() {
        let svg = line_plot("a<b", &[]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a&lt;b"));
    }
}
