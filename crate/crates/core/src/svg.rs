//! SVG drawings of planar parliaments with the per-cone characters.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactlin::vector_text;
use crate::format::RationalText;
use crate::parliament::ParliamentPolytope;
use crate::QBundle;

const SCALE: f64 = 40.0;
const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#9c755f"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Glyph {
    Square,
    Diamond,
    Circle,
    Triangle,
}

const GLYPHS: [Glyph; 4] = [Glyph::Square, Glyph::Diamond, Glyph::Circle, Glyph::Triangle];

struct Frame {
    x0: i64,
    y1: i64,
    width: f64,
    height: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        (x - self.x0 as f64) * SCALE
    }

    fn y(&self, y: f64) -> f64 {
        (self.y1 as f64 - y) * SCALE
    }
}

fn point(v: &[crate::Rational]) -> (f64, f64) {
    (v[0].to_f64().unwrap_or(0.0), v[1].to_f64().unwrap_or(0.0))
}

/// Vertices in counterclockwise order around their centroid.
fn hull_order(vertices: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = vertices.len() as f64;
    let cx = vertices.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = vertices.iter().map(|p| p.1).sum::<f64>() / n;
    let mut out = vertices.to_vec();
    out.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    out
}

fn glyph(out: &mut String, g: Glyph, x: f64, y: f64, fill: &str) {
    let r = 6.0;
    let _ = match g {
        Glyph::Square => writeln!(
            out,
            r#"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="black" stroke-width="1.5"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        Glyph::Diamond => writeln!(
            out,
            r#"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="black" stroke-width="1.5"/>"#,
            x,
            y - 1.3 * r,
            x + 1.3 * r,
            y,
            x,
            y + 1.3 * r,
            x - 1.3 * r,
            y
        ),
        Glyph::Circle => {
            writeln!(out, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="black" stroke-width="1.5"/>"#)
        }
        Glyph::Triangle => writeln!(
            out,
            r#"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="black" stroke-width="1.5"/>"#,
            x,
            y - 1.3 * r,
            x + 1.2 * r,
            y + 0.8 * r,
            x - 1.2 * r,
            y + 0.8 * r
        ),
    };
}

/// The parliament as an SVG 1.1 document.
///
/// Each nonempty polytope is drawn as a polygon, segment or dot with a label;
/// each maximal cone's characters get their own glyph, hollow when the
/// character lies in no polytope. Empty members appear in the legend only.
pub fn render_svg(bundle: &QBundle, members: &[ParliamentPolytope]) -> Result<String> {
    let d = bundle.fan().dim();
    if d != 2 {
        return Err(Error::NotPlanar(d));
    }
    let characters: Vec<(usize, Vec<i64>)> = (0..bundle.fan().num_cones())
        .flat_map(|c| bundle.cone_characters(c).iter().map(move |(u, _)| (c, u.clone())))
        .collect();
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for m in members {
        for v in &m.polytope.vertices {
            let (x, y) = point(v);
            xs.push(x);
            ys.push(y);
        }
    }
    for (_, u) in &characters {
        xs.push(u[0] as f64);
        ys.push(u[1] as f64);
    }
    let lo = |v: &[f64]| v.iter().copied().fold(0.0f64, f64::min).floor() as i64 - 1;
    let hi = |v: &[f64]| v.iter().copied().fold(0.0f64, f64::max).ceil() as i64 + 1;
    let (x0, x1, y0, y1) = (lo(&xs), hi(&xs), lo(&ys), hi(&ys));
    let legend_rows = members.len() + bundle.fan().num_cones();
    let frame = Frame { x0, y1, width: (x1 - x0) as f64 * SCALE, height: (y1 - y0) as f64 * SCALE };
    let legend_height = 18.0 * legend_rows as f64 + 16.0;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}" font-family="sans-serif" font-size="12">"#,
        frame.width,
        frame.height + legend_height,
        frame.width,
        frame.height + legend_height
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for x in x0..=x1 {
        let sx = frame.x(x as f64);
        let stroke = if x == 0 { r##"stroke="#000" stroke-width="1.2""## } else { r##"stroke="#ddd" stroke-width="0.6""## };
        let _ = writeln!(out, r#"  <line x1="{sx:.2}" y1="0.00" x2="{sx:.2}" y2="{:.2}" {stroke}/>"#, frame.height);
    }
    for y in y0..=y1 {
        let sy = frame.y(y as f64);
        let stroke = if y == 0 { r##"stroke="#000" stroke-width="1.2""## } else { r##"stroke="#ddd" stroke-width="0.6""## };
        let _ = writeln!(out, r#"  <line x1="0.00" y1="{sy:.2}" x2="{:.2}" y2="{sy:.2}" {stroke}/>"#, frame.width);
    }
    for (n, m) in members.iter().enumerate() {
        if m.is_empty() {
            continue;
        }
        let color = PALETTE[n % PALETTE.len()];
        let pts: Vec<(f64, f64)> = m.polytope.vertices.iter().map(|v| point(v)).collect();
        let label = format!("P{}", vector_text(&m.vector.iter().cloned().map(RationalText).collect::<Vec<_>>()));
        match pts.len() {
            1 => {
                let _ = writeln!(
                    out,
                    r#"  <circle class="polytope" cx="{:.2}" cy="{:.2}" r="4.00" fill="{color}"/>"#,
                    frame.x(pts[0].0),
                    frame.y(pts[0].1)
                );
            }
            2 => {
                let _ = writeln!(
                    out,
                    r#"  <line class="polytope" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="4"/>"#,
                    frame.x(pts[0].0),
                    frame.y(pts[0].1),
                    frame.x(pts[1].0),
                    frame.y(pts[1].1)
                );
            }
            _ => {
                let coords: Vec<String> =
                    hull_order(&pts).iter().map(|(x, y)| format!("{:.2},{:.2}", frame.x(*x), frame.y(*y))).collect();
                let _ = writeln!(
                    out,
                    r#"  <polygon class="polytope" points="{}" fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="2"/>"#,
                    coords.join(" ")
                );
            }
        }
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let _ = writeln!(out, r#"  <text x="{:.2}" y="{:.2}" fill="{color}">{label}</text>"#, frame.x(cx) + 6.0, frame.y(cy) - 6.0);
    }
    for (c, u) in &characters {
        let covered = members.iter().any(|m| m.polytope.lattice_points.contains(u));
        let fill = if covered { "black" } else { "white" };
        glyph(&mut out, GLYPHS[c % GLYPHS.len()], frame.x(u[0] as f64), frame.y(u[1] as f64), fill);
    }
    let mut row = frame.height + 18.0;
    for (n, m) in members.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let label = vector_text(&m.vector.iter().cloned().map(RationalText).collect::<Vec<_>>());
        let state = if m.is_empty() { " (empty)" } else { "" };
        let _ = writeln!(out, r#"  <text class="legend" x="8.00" y="{row:.2}" fill="{color}">P{label}{state}</text>"#);
        row += 18.0;
    }
    for c in 0..bundle.fan().num_cones() {
        glyph(&mut out, GLYPHS[c % GLYPHS.len()], 14.0, row - 4.0, "black");
        let rays: Vec<usize> = bundle.fan().cone(c).iter().map(|i| i + 1).collect();
        let _ = writeln!(out, r#"  <text class="legend" x="28.00" y="{row:.2}">cone {} {}</text>"#, c + 1, vector_text(&rays));
        row += 18.0;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::parliament::parliament;

    fn drawing(b: &QBundle) -> String {
        render_svg(b, &parliament(b).unwrap()).unwrap()
    }

    #[test]
    fn f_has_four_triangles_and_one_hollow_marker() {
        let s = drawing(&examples::bundle_f());
        assert_eq!(s.matches(r#"<polygon class="polytope""#).count(), 4);
        assert_eq!(s.matches(r#"fill="white" stroke="black""#).count(), 1);
        assert_eq!(s.matches(r#"stroke-width="1.5""#).count(), 9 + 3);
        assert!(s.contains("(empty)"));
    }

    #[test]
    fn tangent_bundle_has_three_triangles() {
        let s = drawing(&examples::tangent_projective(2));
        assert_eq!(s.matches(r#"<polygon class="polytope""#).count(), 3);
        assert_eq!(s.matches(r#"fill="white" stroke="black""#).count(), 0);
    }

    #[test]
    fn h_has_five_members_and_a_single_point() {
        let s = drawing(&examples::bundle_h());
        assert_eq!(s.matches(r#"class="polytope""#).count(), 5);
        assert_eq!(s.matches(r#"<circle class="polytope""#).count(), 1);
    }

    #[test]
    fn drawing_is_deterministic_and_planar_only() {
        let g = examples::bundle_g();
        assert_eq!(drawing(&g), drawing(&g));
        let t = examples::tangent_projective(3);
        assert_eq!(render_svg(&t, &parliament(&t).unwrap()), Err(Error::NotPlanar(3)));
    }
}
