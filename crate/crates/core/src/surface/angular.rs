use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{bolza_circumradius, SurfaceError, SurfaceModel, SurfacePoint};
use crate::hypmath::{Isometry, HPoint, HalfSpace};

/// A finite union of disjoint angle intervals `[start, end]` in `[0, 2 pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularSet {
    pub intervals: Vec<(f64, f64)>,
}

impl AngularSet {
    pub fn full() -> Self {
        AngularSet {
            intervals: vec![(0.0, TAU)],
        }
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = theta.rem_euclid(TAU);
        self.intervals.iter().any(|&(a, b)| a <= t && t <= b)
    }

    /// Complement in `[0, 2 pi]` of a union of open arcs `(center - half, center + half)`.
    fn complement_of_arcs(arcs: &[(f64, f64)]) -> Self {
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for &(c, h) in arcs {
            if h >= std::f64::consts::PI {
                return AngularSet { intervals: vec![] };
            }
            let a = (c - h).rem_euclid(TAU);
            let b = a + 2.0 * h;
            if b > TAU {
                pieces.push((a, TAU));
                pieces.push((0.0, b - TAU));
            } else {
                pieces.push((a, b));
            }
        }
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for (a, b) in pieces {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = f64::max(cursor, b);
        }
        if cursor < TAU {
            out.push((cursor, TAU));
        }
        AngularSet { intervals: out }
    }
}

/// Walls of the Dirichlet domain of `x`, moved so that `x` sits at the origin.
pub fn dirichlet_walls(x: &SurfacePoint, surf: &SurfaceModel) -> Result<Vec<HalfSpace>, SurfaceError> {
    let cell = surf.lifted_cell(&x.rep, &[x.rep], Some(0), 2.0 * bolza_circumradius())?;
    let back = Isometry::origin_to(&x.rep).inverse();
    Ok(cell.walls.iter().map(|w| back.apply_halfspace(w)).collect())
}

/// `I_r(x)`: angles `theta` for which the point at distance `r` from `x` in
/// direction `theta` lies in the Dirichlet domain of `x`.
///
/// Directions are measured in the frame carried from the origin to `x` by
/// [`Isometry::origin_to`].
pub fn angular_set(x: &SurfacePoint, r: f64, surf: &SurfaceModel) -> Result<AngularSet, SurfaceError> {
    let walls = dirichlet_walls(x, surf)?;
    Ok(angular_set_from_walls(&walls, r))
}

pub fn angular_set_from_walls(walls: &[HalfSpace], r: f64) -> AngularSet {
    if r <= 0.0 {
        return AngularSet::full();
    }
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut arcs = Vec::new();
    for w in walls {
        let u = w.u;
        let amp = u[1].hypot(u[2]);
        // <P, u> = -u0 cosh r + sinh r * amp * cos(theta - psi) > 0 is excluded
        let c = u[0] * ch / (amp * sh);
        if c >= 1.0 {
            continue;
        }
        let half = if c <= -1.0 { std::f64::consts::PI } else { c.acos() };
        arcs.push((u[2].atan2(u[1]), half));
    }
    AngularSet::complement_of_arcs(&arcs)
}

/// Point at distance `r` from `x` in direction `theta` (same frame as [`angular_set`]).
pub fn polar_about(x: &SurfacePoint, r: f64, theta: f64) -> HPoint {
    Isometry::origin_to(&x.rep).apply(&HPoint::from_polar(r, theta))
}
