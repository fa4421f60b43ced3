use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::point::{dist, mdot, HPoint, MVec};
use super::{GeomError, HalfSpace, Tolerances};

/// A compact convex hyperbolic polygon around a nucleus.
///
/// `walls[i]` carries the edge from `vertices[i]` to `vertices[i + 1]`;
/// `neighbors[i]` is the index of the site that generated that wall, or
/// [`crate::hypmath::ConvexCell::NO_NEIGHBOR`] for walls that do not come
/// from a site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexCell {
    pub nucleus: HPoint,
    pub vertices: Vec<HPoint>,
    pub walls: Vec<HalfSpace>,
    pub neighbors: Vec<usize>,
}

/// Interior angle at `v` between the geodesics towards `a` and `b`.
pub fn interior_angle(v: &HPoint, a: &HPoint, b: &HPoint) -> f64 {
    let vv = v.vec();
    let tangent = |w: &HPoint| -> MVec {
        let wv = w.vec();
        let c = mdot(&wv, &vv);
        [wv[0] + c * vv[0], wv[1] + c * vv[1], wv[2] + c * vv[2]]
    };
    let ta = tangent(a);
    let tb = tangent(b);
    let den = (mdot(&ta, &ta) * mdot(&tb, &tb)).sqrt();
    if den == 0.0 {
        return 0.0;
    }
    (mdot(&ta, &tb) / den).clamp(-1.0, 1.0).acos()
}

/// Gauss–Bonnet area `(n - 2) pi - sum(angles)` of a polygon with the given
/// interior angles; rejects angle sums that leave no positive area.
pub fn area_from_angles(angles: &[f64]) -> Result<f64, GeomError> {
    let n = angles.len();
    if n < 3 {
        return Err(GeomError::DegeneratePolygon(format!("{n} vertices")));
    }
    let area = (n as f64 - 2.0) * PI - angles.iter().sum::<f64>();
    if area <= 0.0 {
        return Err(GeomError::DegeneratePolygon(format!(
            "angle sum leaves area {area:e}"
        )));
    }
    Ok(area)
}

/// Signed area of the geodesic triangle `(O, a, b)`; positive when `a -> b`
/// turns counterclockwise about the origin.
pub fn fan_triangle_area(a: &HPoint, b: &HPoint) -> f64 {
    let det = a.x1 * b.x2 - a.x2 * b.x1;
    let den = 1.0 + a.x0 + b.x0 - mdot(&a.vec(), &b.vec());
    2.0 * det.atan2(den)
}

impl ConvexCell {
    pub const NO_NEIGHBOR: usize = usize::MAX;

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end, wall index)`.
    pub fn edges(&self) -> impl Iterator<Item = (&HPoint, &HPoint, usize)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n], i))
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                interior_angle(
                    &self.vertices[i],
                    &self.vertices[(i + n - 1) % n],
                    &self.vertices[(i + 1) % n],
                )
            })
            .collect()
    }

    /// Gauss–Bonnet area.
    pub fn area(&self) -> Result<f64, GeomError> {
        area_from_angles(&self.interior_angles())
    }

    /// Area as a signed fan of triangles from the origin.
    pub fn fan_area(&self) -> f64 {
        self.edges().map(|(a, b, _)| fan_triangle_area(a, b)).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b, _)| dist(a, b)).sum()
    }

    pub fn max_vertex_distance(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| dist(&self.nucleus, v))
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.walls.iter().all(|w| w.contains(p))
    }

    /// Checks the structural invariants; returns a description of the first violation.
    pub fn check(&self, tol: &Tolerances) -> Result<(), String> {
        let n = self.vertices.len();
        if n < 3 || self.walls.len() != n || self.neighbors.len() != n {
            return Err(format!(
                "inconsistent sizes: {n} vertices, {} walls",
                self.walls.len()
            ));
        }
        for (i, w) in self.walls.iter().enumerate() {
            if !(w.eval(&self.nucleus) < 0.0) {
                return Err(format!("nucleus not strictly inside wall {i}"));
            }
        }
        for i in 0..n {
            let v = &self.vertices[i];
            if !v.is_valid(tol.on_hyperboloid) {
                return Err(format!("vertex {i} off the hyperboloid"));
            }
            // scale by the vertex size; far vertices carry proportionally larger roundoff
            let slack = tol.vertex_on_wall * v.x0;
            let before = self.walls[(i + n - 1) % n].eval(v);
            let after = self.walls[i].eval(v);
            if before.abs() > slack || after.abs() > slack {
                return Err(format!(
                    "vertex {i} not on its walls ({before:e}, {after:e})"
                ));
            }
        }
        // counterclockwise about the nucleus: every fan triangle is positively oriented
        let to_local = super::Isometry::origin_to(&self.nucleus).inverse();
        let local: Vec<HPoint> = self.vertices.iter().map(|v| to_local.apply(v)).collect();
        for i in 0..n {
            if fan_triangle_area(&local[i], &local[(i + 1) % n]) <= 0.0 {
                return Err(format!("edge {i} is not counterclockwise"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmath::{acosh_clamped, Isometry};

    /// Regular n-gon centred at the origin with vertices at radius `r`.
    fn regular(n: usize, r: f64) -> ConvexCell {
        let vertices: Vec<HPoint> = (0..n)
            .map(|k| HPoint::from_polar(r, 2.0 * PI * k as f64 / n as f64))
            .collect();
        let walls = (0..n)
            .map(|k| {
                let a = vertices[k].vec();
                let b = vertices[(k + 1) % n].vec();
                // outward normal: <O,u> < 0
                let mut u = crate::hypmath::mcross(&a, &b);
                if mdot(&HPoint::ORIGIN.vec(), &u) > 0.0 {
                    u = [-u[0], -u[1], -u[2]];
                }
                HalfSpace::from_normal(u).unwrap()
            })
            .collect();
        ConvexCell {
            nucleus: HPoint::ORIGIN,
            vertices,
            walls,
            neighbors: vec![ConvexCell::NO_NEIGHBOR; n],
        }
    }

    #[test]
    fn regular_octagon_with_quarter_pi_angles_has_area_4pi() {
        // circumradius of the regular octagon with interior angles pi/4
        let cot = 1.0 / (PI / 8.0).tan();
        let r = acosh_clamped(cot * cot);
        let oct = regular(8, r);
        for a in oct.interior_angles() {
            assert!((a - PI / 4.0).abs() < 1e-9);
        }
        assert!((oct.area().unwrap() - 4.0 * PI).abs() < 1e-8);
        assert!((oct.fan_area() - 4.0 * PI).abs() < 1e-8);
        oct.check(&Tolerances::DEFAULT).unwrap();
    }

    #[test]
    fn impossible_angle_sum_is_degenerate() {
        assert!(area_from_angles(&[PI / 2.0, PI / 4.0, PI / 4.0]).is_err());
        assert!(area_from_angles(&[PI / 2.0, PI / 4.0]).is_err());
        assert!((area_from_angles(&[0.1, 0.2, 0.3]).unwrap() - (PI - 0.6)).abs() < 1e-15);
    }

    #[test]
    fn fan_area_is_isometry_invariant() {
        let cell = regular(5, 1.2);
        let g = Isometry::translation(2.0, 0.7);
        let moved = ConvexCell {
            nucleus: g.apply(&cell.nucleus),
            vertices: cell.vertices.iter().map(|v| g.apply(v)).collect(),
            walls: cell.walls.iter().map(|w| g.apply_halfspace(w)).collect(),
            neighbors: cell.neighbors.clone(),
        };
        let a = cell.area().unwrap();
        assert!((moved.fan_area() - a).abs() < 1e-9);
        assert!((moved.area().unwrap() - a).abs() < 1e-9);
        assert!((moved.perimeter() - cell.perimeter()).abs() < 1e-9);
        moved.check(&Tolerances::DEFAULT).unwrap();
    }
}
