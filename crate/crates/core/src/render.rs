//! SVG drawings of tessellations in the Poincaré disk.

use std::f64::consts::PI;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypmath::HPoint;
use crate::sampler::Window;
use crate::voronoi::{Piece, Tessellation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("image size {0}x{1} outside [64, 8192]")]
    BadSize(u32, u32),
    #[error("{colors} colors for {cells} cells")]
    ColorCount { colors: usize, cells: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub width_px: u32,
    pub height_px: u32,
    pub stroke_width: f64,
    /// Fill colours for black and white cells.
    pub palette: [String; 2],
    pub show_nuclei: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width_px: 800,
            height_px: 800,
            stroke_width: 0.8,
            palette: ["#000000".into(), "#ffffff".into()],
            show_nuclei: false,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<(), RenderError> {
        let ok = |x: u32| (64..=8192).contains(&x);
        if ok(self.width_px) && ok(self.height_px) {
            Ok(())
        } else {
            Err(RenderError::BadSize(self.width_px, self.height_px))
        }
    }

    fn scale(&self) -> f64 {
        0.48 * self.width_px.min(self.height_px) as f64
    }

    /// Pixel position of a point of the unit disk.
    pub fn to_px(&self, (u, v): (f64, f64)) -> (f64, f64) {
        let s = self.scale();
        (0.5 * self.width_px as f64 + s * u, 0.5 * self.height_px as f64 - s * v)
    }
}

/// Support of a geodesic in the disk: a diameter or a circle orthogonal to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskArc {
    Line,
    Circle { center: (f64, f64), radius: f64 },
}

/// The circle through `p` and `q` orthogonal to the unit circle.
pub fn geodesic_arc(p: (f64, f64), q: (f64, f64)) -> DiskArc {
    // 2 c.p = |p|^2 + 1 and 2 c.q = |q|^2 + 1
    let det = p.0 * q.1 - p.1 * q.0;
    let scale = (p.0.hypot(p.1) * q.0.hypot(q.1)).max(1e-300);
    if det.abs() <= 1e-9 * scale {
        return DiskArc::Line;
    }
    let a = 0.5 * (p.0 * p.0 + p.1 * p.1 + 1.0);
    let b = 0.5 * (q.0 * q.0 + q.1 * q.1 + 1.0);
    let center = ((a * q.1 - b * p.1) / det, (p.0 * b - q.0 * a) / det);
    let radius = (center.0 * center.0 + center.1 * center.1 - 1.0).sqrt();
    DiskArc::Circle { center, radius }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn rim_point(rho: f64, theta: f64) -> (f64, f64) {
    (rho * theta.cos(), rho * theta.sin())
}

/// Appends the path segment from the current point `from` to `to` along the geodesic.
fn side_to(d: &mut String, spec: &RenderSpec, from: (f64, f64), to: (f64, f64)) {
    let (x1, y1) = spec.to_px(from);
    let (x2, y2) = spec.to_px(to);
    match geodesic_arc(from, to) {
        DiskArc::Line => {
            let _ = write!(d, " L {} {}", num(x2), num(y2));
        }
        DiskArc::Circle { center, radius } => {
            let (cx, cy) = spec.to_px(center);
            let cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx);
            let r = radius * spec.scale();
            let _ = write!(
                d,
                " A {} {} 0 0 {} {} {}",
                num(r),
                num(r),
                u8::from(cross > 0.0),
                num(x2),
                num(y2)
            );
        }
    }
}

fn rim_to(d: &mut String, spec: &RenderSpec, rho: f64, start: f64, sweep: f64) {
    let r = num(rho * spec.scale());
    // split long arcs so the large-arc flag never has to carry a full turn
    let steps = (sweep / (0.75 * PI)).ceil().max(1.0) as usize;
    for k in 1..=steps {
        let (x, y) = spec.to_px(rim_point(rho, start + sweep * k as f64 / steps as f64));
        // counterclockwise in the disk is a negative sweep on screen
        let _ = write!(d, " A {r} {r} 0 0 0 {} {}", num(x), num(y));
    }
}

fn disk_of(p: &HPoint) -> (f64, f64) {
    p.to_disk()
}

fn cell_path(cell: &crate::voronoi::TessCell, rho: f64, spec: &RenderSpec) -> Option<String> {
    let first = cell.boundary.first()?;
    let start = match first {
        Piece::Side { from, .. } => disk_of(from),
        Piece::Rim { start, .. } => rim_point(rho, *start),
    };
    let (x, y) = spec.to_px(start);
    let mut d = format!("M {} {}", num(x), num(y));
    let mut cur = start;
    for piece in &cell.boundary {
        match piece {
            Piece::Side { to, .. } => {
                let t = disk_of(to);
                side_to(&mut d, spec, cur, t);
                cur = t;
            }
            Piece::Rim { start, sweep } => {
                rim_to(&mut d, spec, rho, *start, *sweep);
                cur = rim_point(rho, start + sweep);
            }
        }
    }
    d.push_str(" Z");
    Some(d)
}

/// Renders the tessellation; `colors[i]` true paints cell `i` with the first palette colour.
pub fn render_svg(t: &Tessellation, colors: Option<&[bool]>, spec: &RenderSpec) -> Result<String, RenderError> {
    spec.validate()?;
    if let Some(c) = colors {
        if c.len() != t.cells.len() {
            return Err(RenderError::ColorCount {
                colors: c.len(),
                cells: t.cells.len(),
            });
        }
    }
    let rho = match t.window {
        Window::Disk { radius } => (radius / 2.0).tanh(),
        Window::Domain { .. } => 1.0,
    };
    let (w, h) = (spec.width_px, spec.height_px);
    let (cx, cy) = spec.to_px((0.0, 0.0));
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
        num(cx),
        num(cy),
        num(spec.scale()),
        spec.palette[0],
        num(spec.stroke_width)
    );
    let _ = writeln!(out, r#"<g stroke="{}" stroke-width="{}" stroke-linejoin="round">"#, spec.palette[0], num(spec.stroke_width));
    for (i, cell) in t.cells.iter().enumerate() {
        let Some(d) = cell_path(cell, rho, spec) else { continue };
        let fill = match colors {
            Some(c) => spec.palette[usize::from(!c[i])].as_str(),
            None => "none",
        };
        let _ = writeln!(out, r#"<path fill="{fill}" d="{d}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    if spec.show_nuclei {
        let r = num(1.5 * spec.stroke_width.max(1.0));
        let _ = writeln!(out, r##"<g fill="#d0202a">"##);
        for p in &t.nuclei {
            let (x, y) = spec.to_px(disk_of(p));
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{r}"/>"#, num(x), num(y));
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Angle by which a circle of centre `c` and radius `r` misses orthogonality with the unit circle.
pub fn orthogonality_defect(center: (f64, f64), radius: f64) -> f64 {
    let c2 = center.0 * center.0 + center.1 * center.1;
    // cos of the intersection angle is (|c|^2 - 1 - r^2) / (2 r)
    ((c2 - 1.0 - radius * radius) / (2.0 * radius)).clamp(-1.0, 1.0).asin().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmath::along;
    use crate::sampler::{poisson_disk, Seed};
    use crate::voronoi::tessellate_window;

    fn sample_tess() -> Tessellation {
        tessellate_window(&poisson_disk(1.0, 4.0, Seed::new(7)).unwrap())
    }

    #[test]
    fn deterministic_output() {
        let t = sample_tess();
        let colors: Vec<bool> = (0..t.cells.len()).map(|i| i % 3 == 0).collect();
        let spec = RenderSpec::default();
        let a = render_svg(&t, Some(&colors), &spec).unwrap();
        let b = render_svg(&sample_tess(), Some(&colors), &spec).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("fill=\"#000000\""));
        let plain = render_svg(&t, None, &spec).unwrap();
        assert!(!plain.contains("fill=\"#ffffff\""));
        assert_eq!(plain.matches("<path").count(), t.cells.len());
    }

    #[test]
    fn arcs_are_geodesics() {
        let mut rng = Seed::new(8).rng();
        for _ in 0..500 {
            let p = crate::sampler::uniform_in_disk(&mut rng, 5.0);
            let q = crate::sampler::uniform_in_disk(&mut rng, 5.0);
            let (dp, dq) = (p.to_disk(), q.to_disk());
            if let DiskArc::Circle { center, radius } = geodesic_arc(dp, dq) {
                assert!(orthogonality_defect(center, radius) < 1e-3);
                // endpoints and the geodesic midpoint lie on the circle
                for m in [dp, dq, along(&p, &q, 0.5).to_disk()] {
                    let r = (m.0 - center.0).hypot(m.1 - center.1);
                    assert!((r - radius).abs() < 1e-9 * radius.max(1.0));
                }
            }
        }
        assert_eq!(geodesic_arc((0.2, 0.2), (-0.4, -0.4)), DiskArc::Line);
    }

    #[test]
    fn path_endpoints_hit_vertices() {
        let t = sample_tess();
        let spec = RenderSpec::default();
        let svg = render_svg(&t, None, &spec).unwrap();
        let paths: Vec<&str> = svg.lines().filter(|l| l.starts_with("<path")).collect();
        for (cell, line) in t.cells.iter().zip(paths) {
            let d = line.split("d=\"").nth(1).unwrap().trim_end_matches("\"/>");
            let nums: Vec<f64> = d.split_whitespace().filter_map(|s| s.parse().ok()).collect();
            for (a, _, _) in cell.sides() {
                let (x, y) = spec.to_px(a.to_disk());
                let hit = nums.windows(2).any(|w| (w[0] - x).abs() < 0.5 && (w[1] - y).abs() < 0.5);
                assert!(hit, "vertex ({x}, {y}) missing");
            }
        }
    }

    // Centre of an SVG arc from its endpoints and flags, after the SVG
    // implementation notes for circular arcs.
    fn svg_arc_center(p1: (f64, f64), p2: (f64, f64), r: f64, large: bool, sweep: bool) -> (f64, f64) {
        let (hx, hy) = ((p1.0 - p2.0) / 2.0, (p1.1 - p2.1) / 2.0);
        let h2 = hx * hx + hy * hy;
        let coef = ((r * r - h2).max(0.0) / h2).sqrt() * if large != sweep { 1.0 } else { -1.0 };
        (coef * hy + (p1.0 + p2.0) / 2.0, -coef * hx + (p1.1 + p2.1) / 2.0)
    }

    #[test]
    fn arc_flags_select_the_right_circle() {
        let t = sample_tess();
        let spec = RenderSpec::default();
        let svg = render_svg(&t, None, &spec).unwrap();
        let s = spec.scale();
        let (ox, oy) = spec.to_px((0.0, 0.0));
        let mut arcs = 0;
        for line in svg.lines().filter(|l| l.starts_with("<path")) {
            let d = line.split("d=\"").nth(1).unwrap().trim_end_matches("\"/>");
            let tok: Vec<&str> = d.split_whitespace().collect();
            let mut i = 0;
            let mut cur = (0.0, 0.0);
            while i < tok.len() {
                let f = |k: usize| tok[i + k].parse::<f64>().unwrap();
                match tok[i] {
                    "M" | "L" => {
                        cur = (f(1), f(2));
                        i += 3;
                    }
                    "A" => {
                        let (r, large, sweep, end) = (f(1), tok[i + 4] == "1", tok[i + 5] == "1", (f(6), f(7)));
                        let c = svg_arc_center(cur, end, r, large, sweep);
                        let (u, v) = ((c.0 - ox) / s, (oy - c.1) / s);
                        let rr = r / s;
                        let rim = u.hypot(v) < 1e-3;
                        let geodesic = (u * u + v * v - 1.0 - rr * rr).abs() < 1e-3 * (1.0 + rr * rr);
                        assert!(rim || geodesic, "arc centre ({u}, {v}) radius {rr}");
                        arcs += 1;
                        cur = end;
                        i += 8;
                    }
                    "Z" => i += 1,
                    other => panic!("unexpected token {other}"),
                }
            }
        }
        assert!(arcs > 100);
    }

    #[test]
    fn rejects_bad_spec() {
        let t = sample_tess();
        let spec = RenderSpec {
            width_px: 10,
            ..RenderSpec::default()
        };
        assert!(render_svg(&t, None, &spec).is_err());
        assert!(render_svg(&t, Some(&[true]), &RenderSpec::default()).is_err());
    }
}
