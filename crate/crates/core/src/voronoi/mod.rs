//! Hyperbolic Voronoi cells by incremental half-plane clipping.

mod index;
mod typical;
mod window;

pub use index::PolarIndex;
pub use typical::{typical_cell, typical_cell_with, TypicalCell, TypicalCellConfig};
pub use window::{boundary_length_near_center, clip_to_disk, tessellate_window, window_cell};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypmath::{
    bisector, cosh_dist, dist, fan_triangle_area, ClipPolygon, ConvexCell, GeomError, HPoint,
    HalfSpace, Tolerances,
};
use crate::sampler::{SampleError, Window};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VoronoiError {
    #[error("cell is unbounded within the available points")]
    UnboundedCell,
    #[error("certification would need a window of radius {needed:.2} (cap {cap})")]
    WindowCap { needed: f64, cap: f64 },
    #[error("nucleus coincides with site {index} (distance {distance:e})")]
    CoincidentSites { index: usize, distance: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Voronoi cell of `nucleus` among `others`.
///
/// Sites are clipped in order of distance. Once the cell is bounded with
/// largest vertex distance `rho`, any site farther than `2 rho` has a
/// bisector that misses the cell, so the scan stops there. `neighbors` of the
/// result index into `others`.
pub fn cell_of(nucleus: &HPoint, others: &[HPoint]) -> Result<ConvexCell, VoronoiError> {
    let mut order: Vec<(f64, usize)> = others
        .iter()
        .enumerate()
        .map(|(i, q)| (cosh_dist(nucleus, q), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut poly = ClipPolygon::frame();
    // cosh(2 rho) once bounded
    let mut stop_at = f64::INFINITY;
    for &(c, i) in &order {
        if c > stop_at {
            break;
        }
        let d = dist(nucleus, &others[i]);
        if d <= Tolerances::DEFAULT.nucleus_separation {
            return Err(VoronoiError::CoincidentSites { index: i, distance: d });
        }
        let h = bisector(nucleus, &others[i])?;
        if poly.clip(&h, i) || !stop_at.is_finite() {
            if let Some(cmax) = poly.max_cosh_distance(nucleus) {
                // cosh(2 rho) = 2 cosh^2(rho) - 1
                stop_at = 2.0 * cmax * cmax - 1.0;
            }
        }
    }
    poly.into_cell(*nucleus).map_err(|_| VoronoiError::UnboundedCell)
}

/// A piece of a tessellation cell boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Piece {
    /// Geodesic segment shared with the cell of site `neighbor`.
    Side {
        from: HPoint,
        to: HPoint,
        neighbor: usize,
        wall: HalfSpace,
    },
    /// Counterclockwise arc of the window rim.
    Rim { start: f64, sweep: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TessCell {
    pub nucleus: HPoint,
    pub boundary: Vec<Piece>,
    pub area: f64,
}

impl TessCell {
    pub fn from_convex(cell: &ConvexCell) -> Self {
        let boundary = cell
            .edges()
            .map(|(a, b, i)| Piece::Side {
                from: *a,
                to: *b,
                neighbor: cell.neighbors[i],
                wall: cell.walls[i],
            })
            .collect::<Vec<_>>();
        let area = cell.area().unwrap_or_else(|_| cell.fan_area());
        TessCell {
            nucleus: cell.nucleus,
            boundary,
            area,
        }
    }

    pub fn sides(&self) -> impl Iterator<Item = (&HPoint, &HPoint, usize)> + '_ {
        self.boundary.iter().filter_map(|p| match p {
            Piece::Side { from, to, neighbor, .. } => Some((from, to, *neighbor)),
            Piece::Rim { .. } => None,
        })
    }

    /// Total length of the geodesic sides (rim arcs excluded).
    pub fn side_length(&self) -> f64 {
        self.sides().map(|(a, b, _)| dist(a, b)).sum()
    }

    /// Whether `p` satisfies every side's half-plane (rim not checked).
    pub fn walls_contain(&self, p: &HPoint) -> bool {
        self.boundary.iter().all(|piece| match piece {
            Piece::Side { wall, .. } => wall.eval(p) <= 1e-12 * p.x0,
            Piece::Rim { .. } => true,
        })
    }
}

/// Signed area enclosed by a boundary made of sides and rim arcs of radius `rim`.
pub fn boundary_area(boundary: &[Piece], rim: f64) -> f64 {
    let sector = crate::hypmath::ball_area(rim) / std::f64::consts::TAU;
    boundary
        .iter()
        .map(|p| match p {
            Piece::Side { from, to, .. } => fan_triangle_area(from, to),
            Piece::Rim { sweep, .. } => sector * sweep,
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tessellation {
    pub nuclei: Vec<HPoint>,
    pub cells: Vec<TessCell>,
    pub window: Window,
    /// Length of the union of interior cell sides, each counted once.
    pub boundary_length: f64,
}

impl Tessellation {
    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// Index of the cell containing `p`, found through the nearest nucleus.
    pub fn nearest_nucleus(&self, p: &HPoint) -> Option<usize> {
        self.nuclei
            .iter()
            .enumerate()
            .min_by(|a, b| cosh_dist(p, a.1).total_cmp(&cosh_dist(p, b.1)).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i)
    }

    /// Index of a cell whose walls contain `p`.
    pub fn locate(&self, p: &HPoint) -> Option<usize> {
        self.cells.iter().position(|c| c.walls_contain(p))
    }

    /// Interior side length inside the disk of radius `r` about the origin, each side counted once.
    pub fn boundary_length_within(&self, r: f64) -> f64 {
        let mut total = 0.0;
        for cell in &self.cells {
            for (a, b, _) in cell.sides() {
                total += segment_length_in_disk(a, b, r);
            }
        }
        total / 2.0
    }
}

/// Length of the part of the segment `[a, b]` within distance `r` of the origin.
pub fn segment_length_in_disk(a: &HPoint, b: &HPoint, r: f64) -> f64 {
    let len = dist(a, b);
    if len == 0.0 {
        return 0.0;
    }
    // p(s) = cosh(s) a + sinh(s) w; its x0 is A cosh s + B sinh s
    let av = a.vec();
    let bv = b.vec();
    let c = -crate::hypmath::mdot(&av, &bv);
    let w = crate::hypmath::axpby(1.0, &bv, -c, &av);
    let wn = crate::hypmath::mdot(&w, &w).sqrt();
    let (ca, cb) = (av[0], w[0] / wn);
    let target = r.cosh();
    // (A+B) t^2 - 2C t + (A-B) = 0 with t = e^s
    let qa = ca + cb;
    let qb = -2.0 * target;
    let qc = ca - cb;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 || qa <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let t1 = (-qb - sq) / (2.0 * qa);
    let t2 = (-qb + sq) / (2.0 * qa);
    if t2 <= 0.0 {
        return 0.0;
    }
    let s1 = if t1 > 0.0 { t1.ln() } else { f64::NEG_INFINITY };
    let s2 = t2.ln();
    let lo = s1.max(0.0);
    let hi = s2.min(len);
    (hi - lo).max(0.0)
}
