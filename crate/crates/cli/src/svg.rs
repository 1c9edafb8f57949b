//! SVG pictures of plane tropical curves.

use std::fmt::Write;

use exploded_core::rational::{parse_rational, to_f64, Rational};
use exploded_core::tropcurve::BalancedGraph;
use exploded_core::{Error, Result};

const SIZE: f64 = 400.0;
const INSET: f64 = 120.0;

/// Axis-parallel box `[x0, x1] x [y0, y1]` in tropical coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Viewport {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Viewport {
    pub fn parse(x0: &str, x1: &str, y0: &str, y1: &str) -> Result<Self> {
        let f = |s: &str| parse_rational(s).map(|q| to_f64(&q));
        let v = Viewport { x: (f(x0)?, f(x1)?), y: (f(y0)?, f(y1)?) };
        if !(v.x.0 < v.x.1 && v.y.0 < v.y.1) {
            return Err(Error::Validation("viewport bounds must increase".into()));
        }
        Ok(v)
    }

    /// Bounding box of the finite features with a margin.
    fn around(g: &BalancedGraph) -> Self {
        let pts: Vec<Vec<f64>> = g
            .vertices
            .iter()
            .chain(g.lines.iter().map(|l| &l.point))
            .map(|p| p.iter().map(to_f64).collect())
            .collect();
        if pts.is_empty() {
            return Viewport { x: (-1.0, 1.0), y: (-1.0, 1.0) };
        }
        let span = |i: usize| {
            let lo = pts.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        };
        let ((x0, x1), (y0, y1)) = (span(0), span(1));
        let pad = ((x1 - x0).max(y1 - y0) * 0.5).max(1.0);
        Viewport { x: (x0 - pad, x1 + pad), y: (y0 - pad, y1 + pad) }
    }

    fn to_canvas(&self, p: (f64, f64)) -> (f64, f64) {
        ((p.0 - self.x.0) / (self.x.1 - self.x.0) * SIZE, SIZE - (p.1 - self.y.0) / (self.y.1 - self.y.0) * SIZE)
    }

    /// Parameter range of `p + s d` inside the box, intersected with `[lo, hi]`.
    fn clip(&self, p: (f64, f64), d: (f64, f64), lo: f64, hi: f64) -> Option<(f64, f64)> {
        let (mut s0, mut s1) = (lo, hi);
        for (q, u) in [(-d.0, p.0 - self.x.0), (d.0, self.x.1 - p.0), (-d.1, p.1 - self.y.0), (d.1, self.y.1 - p.1)] {
            if q == 0.0 {
                if u < 0.0 {
                    return None;
                }
            } else {
                let r = u / q;
                if q < 0.0 {
                    s0 = s0.max(r);
                } else {
                    s1 = s1.min(r);
                }
            }
        }
        (s0 < s1).then_some((s0, s1))
    }
}

pub struct Svg {
    pub text: String,
    pub lines: usize,
    pub labels: usize,
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" { "0.00".into() } else { s }
}

fn point(p: &[Rational]) -> (f64, f64) {
    (to_f64(&p[0]), to_f64(&p[1]))
}

/// Edges, rays and lines as `<line>` elements clipped to the viewport, weights
/// above one as labels, and optionally the dual subdivision in an inset.
pub fn render_svg(g: &BalancedGraph, viewport: Option<&Viewport>, inset: bool) -> Result<Svg> {
    if g.n != 2 {
        return Err(Error::Capability(format!("only plane curves can be drawn, got n = {}", g.n)));
    }
    let vp = viewport.cloned().unwrap_or_else(|| Viewport::around(g));
    let mut segments: Vec<((f64, f64), (f64, f64), u64)> = Vec::new();
    let mut add = |p: (f64, f64), d: (f64, f64), lo: f64, hi: f64, w: u64| {
        if let Some((s0, s1)) = vp.clip(p, d, lo, hi) {
            segments.push(((p.0 + s0 * d.0, p.1 + s0 * d.1), (p.0 + s1 * d.0, p.1 + s1 * d.1), w));
        }
    };
    for e in &g.edges {
        let (a, b) = (point(&g.vertices[e.from]), point(&g.vertices[e.to]));
        add(a, (b.0 - a.0, b.1 - a.1), 0.0, 1.0, e.weight);
    }
    for r in &g.rays {
        add(point(&g.vertices[r.from]), (r.direction[0] as f64, r.direction[1] as f64), 0.0, f64::INFINITY, r.weight);
    }
    for l in &g.lines {
        add(point(&l.point), (l.direction[0] as f64, l.direction[1] as f64), f64::NEG_INFINITY, f64::INFINITY, l.weight);
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = num(SIZE)
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{s}" height="{s}" fill="white"/>"#, s = num(SIZE));
    let mut labels = 0;
    for (a, b, w) in &segments {
        let (p, q) = (vp.to_canvas(*a), vp.to_canvas(*b));
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{}"/>"#,
            num(p.0),
            num(p.1),
            num(q.0),
            num(q.1),
            num(1.0 + 0.5 * (*w as f64 - 1.0))
        );
        if *w > 1 {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="blue">{w}</text>"#,
                num((p.0 + q.0) / 2.0 + 4.0),
                num((p.1 + q.1) / 2.0 - 4.0)
            );
            labels += 1;
        }
    }
    for v in &g.vertices {
        let c = vp.to_canvas(point(v));
        if (0.0..=SIZE).contains(&c.0) && (0.0..=SIZE).contains(&c.1) {
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="black"/>"#, num(c.0), num(c.1));
        }
    }
    if let (true, Some(dual)) = (inset, &g.dual_subdivision) {
        let pts = dual.newton_polygon.iter().chain(dual.cells.iter().flat_map(|c| &c.hull));
        let (mut lo, mut hi) = ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN));
        for p in pts {
            lo = (lo.0.min(p[0]), lo.1.min(p[1]));
            hi = (hi.0.max(p[0]), hi.1.max(p[1]));
        }
        if lo.0 <= hi.0 {
            let scale = (INSET - 20.0) / ((hi.0 - lo.0).max(hi.1 - lo.1).max(1) as f64);
            let at = |p: &Vec<i64>| (SIZE - INSET + 10.0 + (p[0] - lo.0) as f64 * scale, INSET - 10.0 - (p[1] - lo.1) as f64 * scale);
            let _ = writeln!(out, r#"<g class="dual-subdivision">"#);
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="0" width="{i}" height="{i}" fill="white" stroke="gray"/>"#,
                num(SIZE - INSET),
                i = num(INSET)
            );
            for cell in &dual.cells {
                let coords: Vec<String> = cell.hull.iter().map(|p| {
                    let (x, y) = at(p);
                    format!("{},{}", num(x), num(y))
                }).collect();
                let _ = writeln!(out, r#"<polygon points="{}" fill="none" stroke="gray"/>"#, coords.join(" "));
            }
            let _ = writeln!(out, "</g>");
        }
    }
    out.push_str("</svg>\n");
    Ok(Svg { text: out, lines: segments.len(), labels })
}
