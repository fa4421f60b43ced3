//! Hyperbolic-plane primitives in the hyperboloid model.
//!
//! Points live on the upper sheet of `x1^2 + x2^2 - x0^2 = -1`. Geodesics are
//! the intersections of the sheet with planes through the origin, so a
//! half-plane is the sign condition `<x, u> <= 0` for a unit spacelike normal
//! `u`. The Poincaré disk and Klein coordinates are derived views only.

mod clip;
mod isometry;
mod point;
mod polygon;

pub use clip::{ClipPolygon, FRAME};
pub use isometry::Isometry;
pub use point::{
    acosh_clamped, along, ball_area, ball_circumference, ball_radius_for_area, cosh_dist,
    disk_distance, dist, law_of_cosines, mcross, mdot, midpoint, wrap_angle, HPoint, MVec,
    PolarCoord,
};
pub(crate) use point::{axpby, scale, sub};
pub use polygon::{area_from_angles, fan_triangle_area, interior_angle, ConvexCell};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("points coincide (distance {0:e}); bisector undefined")]
    DegenerateBisector(f64),
    #[error("polygon is degenerate: {0}")]
    DegeneratePolygon(String),
    #[error("cell is unbounded")]
    Unbounded,
}

/// Numerical tolerances shared by the geometry routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|<p,p> + 1|` allowed for points on the hyperboloid.
    pub on_hyperboloid: f64,
    /// `|<v,u>|` allowed for a vertex lying on a wall.
    pub vertex_on_wall: f64,
    /// Equidistance slack on bisectors.
    pub equidistance: f64,
    /// Two points closer than this are considered coincident.
    pub coincident: f64,
    /// Nuclei closer than this are rejected as degenerate.
    pub nucleus_separation: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        on_hyperboloid: 1e-9,
        vertex_on_wall: 1e-7,
        equidistance: 1e-8,
        coincident: 1e-12,
        nucleus_separation: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The closed half-plane `{x : <x, u> <= 0}` bounded by a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub u: MVec,
}

impl HalfSpace {
    /// Normalizes `u` to `<u,u> = 1`. Returns `None` unless `u` is spacelike.
    pub fn from_normal(u: MVec) -> Option<Self> {
        let n2 = mdot(&u, &u);
        if !(n2 > 0.0) {
            return None;
        }
        Some(HalfSpace {
            u: scale(&u, 1.0 / n2.sqrt()),
        })
    }

    /// Signed value `<p, u>`, which equals `sinh` of the signed distance to the boundary.
    #[inline]
    pub fn eval(&self, p: &HPoint) -> f64 {
        mdot(&p.vec(), &self.u)
    }

    /// Signed distance from `p` to the boundary geodesic (negative inside).
    pub fn signed_distance(&self, p: &HPoint) -> f64 {
        self.eval(p).asinh()
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.eval(p) <= 0.0
    }

    pub fn complement(&self) -> HalfSpace {
        HalfSpace {
            u: [-self.u[0], -self.u[1], -self.u[2]],
        }
    }

    /// Two points spanning the boundary geodesic, each at distance `extent`
    /// from the foot of the perpendicular from the origin.
    pub fn boundary_points(&self, extent: f64) -> (HPoint, HPoint) {
        let o = HPoint::ORIGIN.vec();
        let c = mdot(&o, &self.u);
        let foot = HPoint::from_timelike(&axpby(1.0, &o, -c, &self.u)).expect("foot is timelike");
        let w = mcross(&self.u, &foot.vec());
        let wn = mdot(&w, &w).sqrt();
        let w = scale(&w, 1.0 / wn);
        let a = axpby(extent.cosh(), &foot.vec(), extent.sinh(), &w);
        let b = axpby(extent.cosh(), &foot.vec(), -extent.sinh(), &w);
        (
            HPoint::from_timelike(&a).unwrap(),
            HPoint::from_timelike(&b).unwrap(),
        )
    }
}

/// The half-plane of points at least as close to `p` as to `q`.
pub fn bisector(p: &HPoint, q: &HPoint) -> Result<HalfSpace, GeomError> {
    let d = dist(p, q);
    if d <= Tolerances::DEFAULT.coincident {
        return Err(GeomError::DegenerateBisector(d));
    }
    // |q - p|_M = 2 sinh(d/2)
    let n = 2.0 * (d / 2.0).sinh();
    Ok(HalfSpace {
        u: scale(&sub(&q.vec(), &p.vec()), 1.0 / n),
    })
}
