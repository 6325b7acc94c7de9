//! Deterministic SVG stem plots of atomic measures.

use std::fmt::Write;

use monofock::error::check_cap;
use monofock::{Error, Result};

use crate::commands::MAX_PLOT_N;

const MARGIN: f64 = 48.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotSpec {
    pub n: usize,
    pub width: u32,
    pub height: u32,
}

impl PlotSpec {
    pub fn new(n: usize, width: u32, height: u32) -> Result<Self> {
        check_cap("n", n, MAX_PLOT_N)?;
        if f64::from(width) <= 3.0 * MARGIN || f64::from(height) <= 3.0 * MARGIN {
            return Err(Error::InvalidArgument(format!(
                "plot must be larger than {0}x{0} pixels",
                3.0 * MARGIN
            )));
        }
        Ok(PlotSpec { n, width, height })
    }
}

/// One vertical stem per atom, height proportional to its weight, on an
/// axis symmetric about 0.
pub fn stem_plot(spec: &PlotSpec, atoms: &[f64], weights: &[f64]) -> String {
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let reach = atoms.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    let x_max = (reach * 2.0).ceil() / 2.0 + 0.25;
    let y_max = weights.iter().fold(0.0f64, |m, &v| m.max(v)) * 1.1;
    let x = |a: f64| MARGIN + (a + x_max) / (2.0 * x_max) * (w - 2.0 * MARGIN);
    let y = |v: f64| h - MARGIN - v / y_max * (h - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">Vacuum distribution of S_{}</text>"#,
        w / 2.0,
        MARGIN / 2.0,
        spec.n
    );
    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        MARGIN,
        y(0.0),
        w - MARGIN,
        y(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        x(0.0),
        y(0.0),
        x(0.0),
        MARGIN
    );
    let ticks = x_max.floor() as i64;
    for t in -ticks..=ticks {
        let tx = x(t as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/>"#,
            y(0.0),
            y(0.0) + 4.0
        );
        let _ = writeln!(s, r#"<text x="{tx:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#, y(0.0) + 18.0);
    }
    let top = y_max / 1.1;
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{top:.4}</text>"#,
        MARGIN - 6.0,
        y(top) + 4.0
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">0</text>"#, MARGIN - 6.0, y(0.0) + 4.0);
    let _ = writeln!(s, r#"<g stroke="steelblue" fill="steelblue">"#);
    for (&a, &v) in atoms.iter().zip(weights) {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke-width="2"/><circle cx="{0:.2}" cy="{2:.2}" r="3"/>"#,
            x(a),
            y(0.0),
            y(v)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_has_two_equal_stems() {
        let spec = PlotSpec::new(1, 640, 400).unwrap();
        let svg = stem_plot(&spec, &[-1.0, 1.0], &[0.5, 0.5]);
        assert_eq!(svg.matches("<circle").count(), 2);
        let heights: Vec<&str> = svg.match_indices("cy=\"").map(|(i, _)| &svg[i + 4..i + 10]).collect();
        assert_eq!(heights[0], heights[1]);
    }

    #[test]
    fn caps() {
        assert!(PlotSpec::new(13, 640, 400).is_err());
        assert!(PlotSpec::new(2, 100, 400).is_err());
    }
}
