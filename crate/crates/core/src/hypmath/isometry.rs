use serde::{Deserialize, Serialize};

use super::point::{acosh_clamped, mdot, HPoint, MVec};
use super::HalfSpace;

/// An element of O+(2,1) acting on the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub m: [[f64; 3]; 3],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rotation by `alpha` about the origin.
    pub fn rotation(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Isometry {
            m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        }
    }

    /// Translation by `t` along the geodesic through the origin with direction `phi`.
    pub fn translation(t: f64, phi: f64) -> Self {
        let boost = Isometry {
            m: [
                [t.cosh(), t.sinh(), 0.0],
                [t.sinh(), t.cosh(), 0.0],
                [0.0, 0.0, 1.0],
            ],
        };
        Self::rotation(phi)
            .compose(&boost)
            .compose(&Self::rotation(-phi))
    }

    /// The translation along the geodesic through the origin that maps the origin to `p`.
    pub fn origin_to(p: &HPoint) -> Self {
        let k = 1.0 / (1.0 + p.x0);
        Isometry {
            m: [
                [p.x0, p.x1, p.x2],
                [p.x1, 1.0 + p.x1 * p.x1 * k, p.x1 * p.x2 * k],
                [p.x2, p.x1 * p.x2 * k, 1.0 + p.x2 * p.x2 * k],
            ],
        }
    }

    /// Reflection across the boundary geodesic of `h`.
    pub fn reflection(h: &HalfSpace) -> Self {
        let u = h.u;
        // x -> x - 2 <x,u> u, written as a matrix acting on column vectors
        let ju = [-u[0], u[1], u[2]];
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = if i == j { 1.0 } else { 0.0 } - 2.0 * u[i] * ju[j];
            }
        }
        Isometry { m }
    }

    pub fn apply_vec(&self, v: &MVec) -> MVec {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// Applies the isometry and renormalizes the image onto the hyperboloid.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        let v = self.apply_vec(&p.vec());
        HPoint::from_spatial(v[1], v[2])
    }

    pub fn apply_halfspace(&self, h: &HalfSpace) -> HalfSpace {
        HalfSpace {
            u: self.apply_vec(&h.u),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = &self.m;
        let b = &other.m;
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Isometry { m }
    }

    /// `J m^T J`.
    pub fn inverse(&self) -> Isometry {
        let a = &self.m;
        let sign = |i: usize| if i == 0 { -1.0 } else { 1.0 };
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = sign(i) * a[j][i] * sign(j);
            }
        }
        Isometry { m }
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Translation length `l` from `trace = 1 + 2 cosh l`; zero for elliptic
    /// and parabolic elements.
    pub fn translation_length(&self) -> f64 {
        acosh_clamped((self.trace() - 1.0) / 2.0)
    }

    /// Largest entrywise deviation from `m^T J m = J`.
    pub fn lorentz_defect(&self) -> f64 {
        let cols: Vec<MVec> = (0..3)
            .map(|j| [self.m[0][j], self.m[1][j], self.m[2][j]])
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = match (i, j) {
                    (0, 0) => -1.0,
                    (a, b) if a == b => 1.0,
                    _ => 0.0,
                };
                worst = worst.max((mdot(&cols[i], &cols[j]) - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Isometry) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmath::{bisector, dist, wrap_angle};
    use std::f64::consts::PI;

    #[test]
    fn identity_and_rotation() {
        let p = HPoint::from_polar(1.7, 0.3);
        assert!(dist(&Isometry::IDENTITY.apply(&p), &p) < 1e-12);
        let q = Isometry::rotation(2.0).apply(&HPoint::from_polar(1.7, 5.0));
        let pc = q.polar();
        assert!((pc.r - 1.7).abs() < 1e-12);
        assert!((pc.theta - wrap_angle(7.0)).abs() < 1e-12);
    }

    #[test]
    fn origin_to_maps_origin() {
        let p = HPoint::from_polar(4.0, 1.1);
        let g = Isometry::origin_to(&p);
        let img = g.apply(&HPoint::ORIGIN);
        assert!(dist(&img, &p) < 1e-10);
        assert!(g.lorentz_defect() < 1e-9);
        let back = g.inverse().apply(&p);
        assert!(dist(&back, &HPoint::ORIGIN) < 1e-10);
    }

    #[test]
    fn translation_length_from_two_reflections() {
        // Two geodesics perpendicular to the x-axis at distances a and b from the origin.
        let t = 1.9;
        let a = HPoint::from_polar(0.3, 0.0);
        let b = HPoint::from_polar(0.3 + t / 2.0, 0.0);
        // geodesic perpendicular to the x-axis through the axis point m
        let wall_at = |m: &HPoint| {
            let left = crate::hypmath::along(m, &HPoint::from_polar(20.0, PI), 0.5);
            let right = crate::hypmath::along(m, &HPoint::from_polar(20.0, 0.0), 0.5);
            bisector(&left, &right).unwrap()
        };
        let g = Isometry::reflection(&wall_at(&b)).compose(&Isometry::reflection(&wall_at(&a)));
        assert!((g.translation_length() - t).abs() < 1e-9);
        // an axis point is moved by exactly t
        let x = HPoint::from_polar(0.1, 0.0);
        assert!((dist(&x, &g.apply(&x)) - t).abs() < 1e-9);
        assert!((Isometry::translation(t, 0.4).translation_length() - t).abs() < 1e-9);
    }

    #[test]
    fn inverse_and_compose() {
        let g = Isometry::translation(1.3, 0.2).compose(&Isometry::rotation(0.9));
        let h = g.compose(&g.inverse());
        assert!(h.max_abs_diff(&Isometry::IDENTITY) < 1e-12);
        assert!(Isometry::rotation(0.5).translation_length() == 0.0);
    }
}
