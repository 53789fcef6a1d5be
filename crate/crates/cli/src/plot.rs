//! SVG renderings: codepoints of the optimal sets for 1..=max_n, and the density.

use std::fmt::Write as _;

use mixquant::{solve, StepDensity};

use crate::error::Result;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 40.0;
const ROW_HEIGHT: f64 = 28.0;
const DENSITY_HEIGHT: f64 = 320.0;
const X_LO: f64 = 0.0;
const X_HI: f64 = 1.5;

/// Map from data coordinates to SVG user space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub height: f64,
    pub y_max: f64,
}

impl Frame {
    pub fn x(&self, x: f64) -> f64 {
        MARGIN + (x - X_LO) / (X_HI - X_LO) * (WIDTH - 2.0 * MARGIN)
    }

    pub fn y(&self, y: f64) -> f64 {
        self.height - MARGIN - y / self.y_max * (self.height - 2.0 * MARGIN)
    }

    /// Inverse of [`Frame::y`].
    pub fn data_y(&self, svg_y: f64) -> f64 {
        (self.height - MARGIN - svg_y) / (self.height - 2.0 * MARGIN) * self.y_max
    }
}

pub fn codepoints_frame(max_n: usize) -> Frame {
    Frame { height: 2.0 * MARGIN + ROW_HEIGHT * max_n as f64, y_max: max_n as f64 }
}

pub fn density_frame() -> Frame {
    Frame { height: DENSITY_HEIGHT, y_max: 1.2 }
}

fn c(x: f64) -> String {
    format!("{x:.4}")
}

fn open(frame: &Frame, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        c(WIDTH),
        c(frame.height),
        c(WIDTH),
        c(frame.height)
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    // x axis with ticks every quarter
    let y0 = frame.y(0.0);
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        c(frame.x(X_LO)),
        c(y0),
        c(frame.x(X_HI)),
        c(y0)
    );
    for i in 0..=6 {
        let x = i as f64 * 0.25;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{x}</text>"#,
            c(frame.x(x)),
            c(y0 + 16.0)
        );
    }
    s
}

/// Every optimal codepoint for `n = 1..=max_n`, row `n` drawn at height `n`.
pub fn codepoints_svg(max_n: usize) -> Result<String> {
    let frame = codepoints_frame(max_n);
    let mut s = open(&frame, &format!("Optimal sets of n-means, 1 <= n <= {max_n}"));
    let _ = writeln!(
        s,
        r#"<line class="center" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
        c(frame.x(0.75)),
        c(frame.y(0.0)),
        c(frame.x(0.75)),
        c(frame.y(max_n as f64 + 0.5))
    );
    for n in 1..=max_n {
        let r = solve(n)?;
        let y = frame.y(n as f64);
        let _ = writeln!(s, r#"<g class="row" data-n="{n}">"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{n}</text>"#,
            c(MARGIN - 8.0),
            c(y + 4.0)
        );
        for &x in r.codebook.points() {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="3"/>"#, c(frame.x(x)), c(y));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// The step density, one horizontal segment per piece joined by verticals.
pub fn density_svg(density: &StepDensity) -> String {
    let frame = density_frame();
    let mut s = open(&frame, "Density function");
    let mut path = format!("M {} {}", c(frame.x(X_LO)), c(frame.y(0.0)));
    for (lo, hi, t) in density.pieces() {
        let _ = write!(path, " L {} {} L {} {}", c(frame.x(lo)), c(frame.y(t)), c(frame.x(hi)), c(frame.y(t)));
    }
    let _ = write!(path, " L {} {}", c(frame.x(X_HI)), c(frame.y(0.0)));
    let _ = writeln!(s, r#"<path class="density" d="{path}" fill="none" stroke="steelblue" stroke-width="2"/>"#);
    for (lo, hi, t) in density.pieces() {
        let _ = writeln!(
            s,
            r#"<line class="step" x1="{}" y1="{}" x2="{}" y2="{}" stroke="steelblue" stroke-width="2"/>"#,
            c(frame.x(lo)),
            c(frame.y(t)),
            c(frame.x(hi)),
            c(frame.y(t))
        );
    }
    s.push_str("</svg>\n");
    s
}
