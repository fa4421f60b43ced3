use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// A raw Minkowski 3-vector `(x0, x1, x2)` with signature `(-, +, +)`.
pub type MVec = [f64; 3];

/// Minkowski bilinear form `-a0 b0 + a1 b1 + a2 b2`.
#[inline]
pub fn mdot(a: &MVec, b: &MVec) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Vector `x` with `<x, a> = <x, b> = 0`, i.e. `J (a x b)`.
#[inline]
pub fn mcross(a: &MVec, b: &MVec) -> MVec {
    [
        -(a[1] * b[2] - a[2] * b[1]),
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn sub(a: &MVec, b: &MVec) -> MVec {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn scale(a: &MVec, s: f64) -> MVec {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn axpby(alpha: f64, a: &MVec, beta: f64, b: &MVec) -> MVec {
    [
        alpha * a[0] + beta * b[0],
        alpha * a[1] + beta * b[1],
        alpha * a[2] + beta * b[2],
    ]
}

/// `arcosh` with its argument clamped to `[1, inf)`.
#[inline]
pub fn acosh_clamped(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.acosh()
    }
}

/// Wraps an angle into `[0, 2pi)`.
#[inline]
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// A point of the hyperbolic plane on the upper sheet of the hyperboloid
/// `x1^2 + x2^2 - x0^2 = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

/// Geodesic polar coordinates about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarCoord {
    pub r: f64,
    pub theta: f64,
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint {
        x0: 1.0,
        x1: 0.0,
        x2: 0.0,
    };

    /// Lifts the spatial part onto the hyperboloid; `x0` is recomputed.
    pub fn from_spatial(x1: f64, x2: f64) -> Self {
        HPoint {
            x0: (1.0 + x1 * x1 + x2 * x2).sqrt(),
            x1,
            x2,
        }
    }

    /// Projects an arbitrary future-timelike vector onto the hyperboloid.
    ///
    /// Returns `None` for vectors that are not timelike or point to the past.
    pub fn from_timelike(v: &MVec) -> Option<Self> {
        let n2 = -mdot(v, v);
        if !(n2 > 0.0) || v[0] <= 0.0 {
            return None;
        }
        let s = 1.0 / n2.sqrt();
        Some(Self::from_spatial(v[1] * s, v[2] * s))
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let sh = r.sinh();
        HPoint {
            x0: r.cosh(),
            x1: sh * c,
            x2: sh * s,
        }
    }

    pub fn polar(&self) -> PolarCoord {
        let rho = self.x1.hypot(self.x2);
        PolarCoord {
            r: rho.asinh(),
            theta: if rho == 0.0 {
                0.0
            } else {
                wrap_angle(self.x2.atan2(self.x1))
            },
        }
    }

    /// Distance from the origin.
    pub fn radius(&self) -> f64 {
        self.x1.hypot(self.x2).asinh()
    }

    pub fn angle(&self) -> f64 {
        self.polar().theta
    }

    /// Poincaré-disk coordinates.
    pub fn to_disk(&self) -> (f64, f64) {
        let d = 1.0 + self.x0;
        (self.x1 / d, self.x2 / d)
    }

    pub fn from_disk(u: f64, v: f64) -> Self {
        let n2 = u * u + v * v;
        let d = 1.0 - n2;
        HPoint {
            x0: (1.0 + n2) / d,
            x1: 2.0 * u / d,
            x2: 2.0 * v / d,
        }
    }

    /// Klein-model coordinates.
    pub fn to_klein(&self) -> (f64, f64) {
        (self.x1 / self.x0, self.x2 / self.x0)
    }

    #[inline]
    pub fn vec(&self) -> MVec {
        [self.x0, self.x1, self.x2]
    }

    /// `<p, p> + 1`, the defect from the hyperboloid.
    pub fn hyperboloid_defect(&self) -> f64 {
        let v = self.vec();
        (mdot(&v, &v) + 1.0).abs()
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.x0 >= 1.0 - tol && self.hyperboloid_defect() <= tol * self.x0 * self.x0
    }
}

/// Hyperbolic distance. Uses `arcosh(-<p,q>)` away from the diagonal and the
/// chord form `2 asinh(|p-q|/2)` for nearby points.
pub fn dist(p: &HPoint, q: &HPoint) -> f64 {
    let c = -mdot(&p.vec(), &q.vec());
    if c > 2.0 {
        return c.acosh();
    }
    let d = sub(&p.vec(), &q.vec());
    let chord2 = mdot(&d, &d).max(0.0);
    2.0 * (chord2.sqrt() / 2.0).asinh()
}

/// `cosh` of the distance, clamped to `>= 1`; cheaper than `dist` for comparisons.
#[inline]
pub fn cosh_dist(p: &HPoint, q: &HPoint) -> f64 {
    (-mdot(&p.vec(), &q.vec())).max(1.0)
}

/// Distance between `[d; 0]` and `[r; theta]`.
pub fn law_of_cosines(d: f64, r: f64, theta: f64) -> f64 {
    acosh_clamped(d.cosh() * r.cosh() - theta.cos() * d.sinh() * r.sinh())
}

pub fn ball_area(r: f64) -> f64 {
    // 2 pi (cosh r - 1) = 4 pi sinh^2(r/2), the latter without cancellation
    let s = (r / 2.0).sinh();
    4.0 * PI * s * s
}

pub fn ball_circumference(r: f64) -> f64 {
    2.0 * PI * r.sinh()
}

/// Radius of the ball with the given area.
pub fn ball_radius_for_area(area: f64) -> f64 {
    2.0 * (area / (4.0 * PI)).sqrt().asinh()
}

/// Midpoint of the geodesic segment `[p, q]`.
pub fn midpoint(p: &HPoint, q: &HPoint) -> HPoint {
    let s = axpby(1.0, &p.vec(), 1.0, &q.vec());
    HPoint::from_timelike(&s).expect("sum of future timelike vectors is timelike")
}

/// Point at distance `t` from `p` along the geodesic towards `q`.
pub fn along(p: &HPoint, q: &HPoint, t: f64) -> HPoint {
    let pv = p.vec();
    let qv = q.vec();
    // unit tangent at p pointing to q
    let c = -mdot(&pv, &qv);
    let w = axpby(1.0, &qv, -c, &pv);
    let n = mdot(&w, &w).max(0.0).sqrt();
    if n == 0.0 {
        return *p;
    }
    let v = axpby(t.cosh(), &pv, t.sinh() / n, &w);
    HPoint::from_timelike(&v).unwrap_or(*p)
}

/// Poincaré-disk distance, used as an independent cross-check of `dist`.
pub fn disk_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let du = a.0 - b.0;
    let dv = a.1 - b.1;
    let num = 2.0 * (du * du + dv * dv);
    let den = (1.0 - a.0 * a.0 - a.1 * a.1) * (1.0 - b.0 * b.0 - b.1 * b.1);
    (1.0 + num / den).acosh()
}
