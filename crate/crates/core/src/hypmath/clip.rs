//! Incremental half-plane clipping in homogeneous coordinates.
//!
//! A polygon starts as the square `|k1|, |k2| <= 2` of the Klein chart, which
//! contains the whole plane, so intermediate cells may be unbounded: their
//! vertices can sit on or beyond the ideal boundary. Timelike vertices are
//! stored on the hyperboloid, all others as Euclidean unit vectors with
//! `x0 > 0`; only the sign of `<v, u>` is used for classification.

use super::point::{axpby, mdot, HPoint, MVec};
use super::{ConvexCell, GeomError, HalfSpace};

/// Label of the four chart-frame edges.
pub const FRAME: usize = usize::MAX - 1;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Vertex {
    pub v: MVec,
    pub timelike: bool,
}

impl Vertex {
    fn normalize(v: MVec) -> Vertex {
        let n2 = mdot(&v, &v);
        let sign = if v[0] < 0.0 { -1.0 } else { 1.0 };
        if n2 < 0.0 {
            let s = sign / (-n2).sqrt();
            let p = HPoint::from_spatial(v[1] * s, v[2] * s);
            Vertex {
                v: p.vec(),
                timelike: true,
            }
        } else {
            let e = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let s = sign / e;
            Vertex {
                v: [v[0] * s, v[1] * s, v[2] * s],
                timelike: false,
            }
        }
    }

    fn close_to(&self, other: &Vertex) -> bool {
        let d = (0..3)
            .map(|i| (self.v[i] - other.v[i]).abs())
            .fold(0.0, f64::max);
        let m = (0..3)
            .map(|i| self.v[i].abs().max(other.v[i].abs()))
            .fold(0.0, f64::max);
        d <= 1e-13 * m
    }

    pub fn point(&self) -> Option<HPoint> {
        self.timelike.then(|| HPoint {
            x0: self.v[0],
            x1: self.v[1],
            x2: self.v[2],
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Edge {
    pub u: MVec,
    pub label: usize,
}

/// A convex region of the projective plane given by its vertex cycle.
#[derive(Debug, Clone)]
pub struct ClipPolygon {
    pub(crate) verts: Vec<Vertex>,
    pub(crate) edges: Vec<Edge>,
}

impl Default for ClipPolygon {
    fn default() -> Self {
        Self::frame()
    }
}

impl ClipPolygon {
    pub fn frame() -> Self {
        let corners = [(-2.0, -2.0), (2.0, -2.0), (2.0, 2.0), (-2.0, 2.0)];
        let verts = corners
            .iter()
            .map(|&(a, b)| Vertex::normalize([1.0, a, b]))
            .collect();
        // k2 >= -2, k1 <= 2, k2 <= 2, k1 >= -2 as <x,u> <= 0
        let normals = [[2.0, 0.0, -1.0], [2.0, 1.0, 0.0], [2.0, 0.0, 1.0], [2.0, -1.0, 0.0]];
        let edges = normals
            .iter()
            .map(|&u| Edge { u, label: FRAME })
            .collect();
        ClipPolygon { verts, edges }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Intersects with `{x : <x,u> <= 0}`. Returns whether anything was cut.
    pub fn clip(&mut self, h: &HalfSpace, label: usize) -> bool {
        let u = h.u;
        let n = self.verts.len();
        if n == 0 {
            return false;
        }
        let f: Vec<f64> = self.verts.iter().map(|v| mdot(&v.v, &u)).collect();
        if f.iter().all(|&x| x <= 0.0) {
            return false;
        }
        let mut verts = Vec::with_capacity(n + 1);
        let mut edges = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let inside_i = f[i] <= 0.0;
            let inside_j = f[j] <= 0.0;
            if inside_i {
                verts.push(self.verts[i]);
                edges.push(self.edges[i]);
            }
            if inside_i != inside_j {
                let (a, b) = (&self.verts[i].v, &self.verts[j].v);
                // positive combination on the segment with <p,u> = 0
                let p = axpby(f[j].abs(), a, f[i].abs(), b);
                let vx = Vertex::normalize(p);
                if inside_i {
                    verts.push(vx);
                    edges.push(Edge { u, label });
                } else {
                    verts.push(vx);
                    edges.push(self.edges[i]);
                }
            }
        }
        // drop zero-length edges created by cuts through existing vertices
        let mut k = 0;
        while verts.len() > 2 && k < verts.len() {
            let next = (k + 1) % verts.len();
            if verts[k].close_to(&verts[next]) {
                verts.remove(k);
                edges.remove(k);
            } else {
                k += 1;
            }
        }
        self.verts = verts;
        self.edges = edges;
        true
    }

    pub fn is_bounded(&self) -> bool {
        self.verts.len() >= 3
            && self.verts.iter().all(|v| v.timelike)
            && self.edges.iter().all(|e| e.label != FRAME)
    }

    /// Largest `cosh` distance from `center` over the vertices; `None` if unbounded.
    pub fn max_cosh_distance(&self, center: &HPoint) -> Option<f64> {
        if !self.is_bounded() {
            return None;
        }
        let c = center.vec();
        Some(
            self.verts
                .iter()
                .map(|v| (-mdot(&v.v, &c)).max(1.0))
                .fold(1.0, f64::max),
        )
    }

    /// Vertex points for a bounded polygon.
    pub fn points(&self) -> Option<Vec<HPoint>> {
        self.verts.iter().map(|v| v.point()).collect()
    }

    pub fn into_cell(self, nucleus: HPoint) -> Result<ConvexCell, GeomError> {
        if !self.is_bounded() {
            return Err(GeomError::Unbounded);
        }
        let vertices = self.points().ok_or(GeomError::Unbounded)?;
        let walls = self.edges.iter().map(|e| HalfSpace { u: e.u }).collect();
        let neighbors = self.edges.iter().map(|e| e.label).collect();
        Ok(ConvexCell {
            nucleus,
            vertices,
            walls,
            neighbors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmath::{bisector, dist, Tolerances};
    use std::f64::consts::PI;

    #[test]
    fn single_halfspace_stays_unbounded() {
        let mut poly = ClipPolygon::frame();
        let h = bisector(&HPoint::ORIGIN, &HPoint::from_polar(1.0, 0.3)).unwrap();
        assert!(poly.clip(&h, 0));
        assert!(!poly.is_bounded());
        assert!(poly.clone().into_cell(HPoint::ORIGIN).is_err());
    }

    #[test]
    fn triangle_from_three_bisectors() {
        let o = HPoint::ORIGIN;
        let sites: Vec<HPoint> = (0..3)
            .map(|k| HPoint::from_polar(1.0, 2.0 * PI * k as f64 / 3.0))
            .collect();
        let mut poly = ClipPolygon::frame();
        for (i, s) in sites.iter().enumerate() {
            poly.clip(&bisector(&o, s).unwrap(), i);
        }
        assert!(poly.is_bounded());
        let cell = poly.into_cell(o).unwrap();
        assert_eq!(cell.len(), 3);
        cell.check(&Tolerances::DEFAULT).unwrap();
        // each vertex is equidistant from the origin and its two defining sites
        for (k, v) in cell.vertices.iter().enumerate() {
            let a = &sites[cell.neighbors[k]];
            assert!((dist(v, &o) - dist(v, a)).abs() < 1e-9);
        }
    }

    #[test]
    fn redundant_clip_is_noop() {
        let o = HPoint::ORIGIN;
        let mut poly = ClipPolygon::frame();
        for k in 0..6 {
            let s = HPoint::from_polar(1.0, PI * k as f64 / 3.0);
            poly.clip(&bisector(&o, &s).unwrap(), k);
        }
        let before = poly.len();
        let far = HPoint::from_polar(10.0, 0.5);
        assert!(!poly.clip(&bisector(&o, &far).unwrap(), 99));
        assert_eq!(poly.len(), before);
    }
}
