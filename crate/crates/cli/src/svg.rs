//! Standalone SVG figures: a lattice with its geodesics, and the convergent
//! points of a continued fraction with Klein's two parallel segments.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::fmt::Write;
use tori_core::{Convergent, Lattice, LengthSpectrum};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;
/// Scenes beyond this many elements are cut short with a warning.
pub const MAX_ELEMENTS: usize = 5000;

struct Canvas {
    body: String,
    /// Maps plane coordinates to pixels.
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Canvas {
    fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        let span = (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
        Self { body: String::new(), x0: xmin, y0: ymax, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.scale, MARGIN + (self.y0 - y) * self.scale)
    }

    fn line(&mut self, class: &str, a: (f64, f64), b: (f64, f64), extra: &str) {
        let (x1, y1) = self.px(a.0, a.1);
        let (x2, y2) = self.px(b.0, b.1);
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"{extra}/>"#
        );
    }

    fn dot(&mut self, class: &str, p: (f64, f64), r: f64, extra: &str) {
        let (cx, cy) = self.px(p.0, p.1);
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{cx:.3}" cy="{cy:.3}" r="{r}"{extra}/>"#);
    }

    fn warning(&mut self, msg: &str) {
        let _ = writeln!(self.body, r#"<text class="warning" x="{MARGIN}" y="{}">{msg}</text>"#, SIZE - 4.0);
    }

    fn finish(self, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, "<title>{title}</title>");
        let _ = writeln!(out, r#"<rect class="background" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn hue(i: usize) -> f64 {
    (i as f64 * 137.507_764) % 360.0
}

/// Lattice points within the cutoff, the origin, and one segment per
/// geodesic class of `segments`, coloured by class.
///
/// `points` should be the full-mode spectrum of the same lattice; its classes
/// and their negatives are drawn as dots.
pub fn lattice_plot(lattice: &Lattice, points: &LengthSpectrum, segments: &LengthSpectrum) -> String {
    let r = segments.cutoff().max(points.cutoff()) * 1.1;
    let mut c = Canvas::new(-r, r, -r, r);
    c.line("axis", (-r, 0.0), (r, 0.0), r##" stroke="#888" stroke-width="0.5""##);
    c.line("axis", (0.0, -r), (0.0, r), r##" stroke="#888" stroke-width="0.5""##);
    if segments.is_empty() && points.is_empty() {
        return c.finish("lattice");
    }
    let mut budget = MAX_ELEMENTS;
    let mut truncated = false;
    'dots: for e in points.entries() {
        for &(m, n) in &e.classes {
            for sign in [1, -1] {
                if budget == 0 {
                    truncated = true;
                    break 'dots;
                }
                budget -= 1;
                let w: Complex64 = lattice.point(sign * m, sign * n);
                c.dot("point", (w.re, w.im), 2.0, r#" fill="black""#);
            }
        }
    }
    let mut class_index = 0;
    'segs: for e in segments.entries() {
        for &(m, n) in &e.classes {
            if budget == 0 {
                truncated = true;
                break 'segs;
            }
            budget -= 1;
            let w = lattice.point(m, n);
            let extra = format!(
                r#" data-class="{m},{n}" stroke="hsl({:.1},70%,45%)" stroke-width="1.5""#,
                hue(class_index)
            );
            c.line("geodesic", (0.0, 0.0), (w.re, w.im), &extra);
            class_index += 1;
        }
    }
    c.dot("origin", (0.0, 0.0), 4.0, r#" fill="red""#);
    if truncated {
        c.warning(&format!("scene truncated at {MAX_ELEMENTS} elements"));
    }
    c.finish("lattice")
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Convergent points `(p_k, q_k)` for `k ≤ ν` with the segment I from
/// `(p_{ν−2}, q_{ν−2})` to `(p_ν, q_ν)` and J from the origin to
/// `(p_{ν−1}, q_{ν−1})`.
///
/// `conv` is the output of `convergents`, starting at index −1.
pub fn klein_plot(conv: &[Convergent], nu: usize) -> String {
    let shown = &conv[..(nu + 2).min(conv.len())];
    let xmax = shown.iter().map(|c| to_f64(&c.p)).fold(1.0, f64::max);
    let xmin = shown.iter().map(|c| to_f64(&c.p)).fold(0.0, f64::min);
    let ymax = shown.iter().map(|c| to_f64(&c.q)).fold(1.0, f64::max);
    let ymin = shown.iter().map(|c| to_f64(&c.q)).fold(0.0, f64::min);
    let mut c = Canvas::new(xmin, xmax, ymin, ymax);
    c.line("axis", (xmin, 0.0), (xmax, 0.0), r##" stroke="#888" stroke-width="0.5""##);
    c.line("axis", (0.0, ymin), (0.0, ymax), r##" stroke="#888" stroke-width="0.5""##);
    if nu + 1 < conv.len() && nu >= 1 {
        let (a, b, j) = (&conv[nu - 1], &conv[nu + 1], &conv[nu]);
        let from_i = format!(r#" data-from="{},{}" data-to="{},{}" stroke="blue" stroke-width="1.5""#, a.p, a.q, b.p, b.q);
        c.line("segment-i", (to_f64(&a.p), to_f64(&a.q)), (to_f64(&b.p), to_f64(&b.q)), &from_i);
        let from_j = format!(r#" data-from="0,0" data-to="{},{}" stroke="green" stroke-width="1.5""#, j.p, j.q);
        c.line("segment-j", (0.0, 0.0), (to_f64(&j.p), to_f64(&j.q)), &from_j);
    }
    for k in shown.iter().take(MAX_ELEMENTS) {
        let extra = format!(r#" data-index="{}" data-p="{}" data-q="{}" fill="black""#, k.index, k.p, k.q);
        c.dot("convergent", (to_f64(&k.p), to_f64(&k.q)), 3.0, &extra);
    }
    if shown.len() > MAX_ELEMENTS {
        c.warning(&format!("scene truncated at {MAX_ELEMENTS} elements"));
    }
    c.finish("klein")
}
