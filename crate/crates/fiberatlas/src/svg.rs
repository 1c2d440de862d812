//! SVG pictures: fiber polygons with paired sides in matching colours,
//! extension certificates, and Newton polygons.

use std::fmt::Write;

use fiberatlas_core::fiber::TranslationFiber;
use fiberatlas_core::newton::LatticePolygon;
use fiberatlas_core::overlap::{ExtensionCertificate, OrientedPolygon};

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// Maps points into the picture, flipping `y` upwards.
struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        Frame { x0, y1, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.scale, MARGIN + (self.y1 - y) * self.scale)
    }
}

fn open() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), colour: &str, width: f64, dash: bool) {
    let dash = if dash { " stroke-dasharray=\"4 3\"" } else { "" };
    let _ = writeln!(
        out,
        "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{colour}\" stroke-width=\"{width}\"{dash}/>",
        a.0, a.1, b.0, b.1
    );
}

fn label(out: &mut String, p: (f64, f64), text: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"11\" font-family=\"sans-serif\">{text}</text>",
        p.0 + 3.0,
        p.1 - 3.0
    );
}

pub fn fiber(f: &TranslationFiber) -> String {
    let m = f.chain.len();
    let pts: Vec<(f64, f64)> = (1..=m).map(|l| (f.chain.vertex(l).re, f.chain.vertex(l).im)).collect();
    let frame = Frame::fit(&pts);
    let mut out = open();
    for p in &f.pairing {
        let colour = PALETTE[(p.letter - 1) % PALETTE.len()];
        for side in [p.side, p.hat_side] {
            let a = frame.map(pts[side - 1]);
            let b = frame.map(pts[side % m]);
            line(&mut out, a, b, colour, 2.5, side == p.hat_side);
        }
    }
    for (l, &p) in pts.iter().enumerate() {
        label(&mut out, frame.map(p), &format!("P{}", l + 1));
    }
    out.push_str("</svg>\n");
    out
}

pub fn extension(p: &OrientedPolygon, cert: Option<&ExtensionCertificate>) -> String {
    let pts = p.to_f64();
    let frame = Frame::fit(&pts);
    let mut out = open();
    if let Some(c) = cert {
        for &(a, b) in &c.cuts {
            line(&mut out, frame.map(pts[a]), frame.map(pts[b]), "#999999", 1.0, true);
        }
    }
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        line(&mut out, frame.map(pts[i]), frame.map(pts[j]), "#1f77b4", 2.0, false);
        label(&mut out, frame.map(pts[i]), &i.to_string());
    }
    out.push_str("</svg>\n");
    out
}

pub fn newton(poly: &LatticePolygon) -> String {
    let mut pts: Vec<(f64, f64)> = poly.boundary.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    pts.push((0.0, 0.0));
    let frame = Frame::fit(&pts);
    let mut out = open();
    let nv = poly.vertices.len();
    for k in 0..nv {
        let a = poly.vertices[k];
        let b = poly.vertices[(k + 1) % nv];
        line(&mut out, frame.map((a.0 as f64, a.1 as f64)), frame.map((b.0 as f64, b.1 as f64)), "#1f77b4", 2.0, false);
    }
    let dot = |out: &mut String, p: (i64, i64), fill: &str| {
        let (x, y) = frame.map((p.0 as f64, p.1 as f64));
        let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{fill}\"/>");
    };
    for &p in &poly.boundary {
        dot(&mut out, p, "#1f77b4");
    }
    for &p in &poly.interior {
        dot(&mut out, p, "#d62728");
    }
    out.push_str("</svg>\n");
    out
}
