//! Palm-typical cell: the cell of an extra nucleus at the origin.
//!
//! The Poisson process is generated lazily in angular sectors, each sector
//! emitting its points in increasing distance from the origin. A point `q`
//! can cut the current cell only if some vertex `v` is closer to `q` than to
//! the origin, i.e. `q` lies in the union of the balls `B(v, |v|)`. Inside a
//! sector that union reaches at most radius `2 atanh(tanh|v| cos a)`, with
//! `a` the angular gap between `v` and the sector. A sector stops once its
//! next point lies beyond that bound, so the unseen points cannot change the
//! cell and the result has the exact Palm law without a fixed window.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VoronoiError;
use crate::hypmath::{bisector, ClipPolygon, ConvexCell, HPoint};
use crate::sampler::{Seed, SampleError, MAX_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypicalCellConfig {
    /// Number of angular sectors.
    pub sectors: usize,
    /// Largest radius at which points may be generated.
    pub radius_cap: f64,
}

impl Default for TypicalCellConfig {
    fn default() -> Self {
        TypicalCellConfig {
            sectors: 64,
            radius_cap: MAX_RADIUS,
        }
    }
}

/// A typical cell together with the sites that shaped it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalCell {
    pub cell: ConvexCell,
    /// Every generated site; `cell.neighbors` index into this list.
    pub sites: Vec<HPoint>,
    /// Largest radius up to which the process was generated in any sector.
    pub explored_radius: f64,
}

struct Sector {
    rng: ChaCha8Rng,
    start: f64,
    width: f64,
    // cumulative Exp(1) mass; sector measure is lambda * width * (cosh r - 1)
    mass: f64,
    next_r: f64,
    next_phi: f64,
}

impl Sector {
    fn new(seed: Seed, start: f64, width: f64, lambda: f64) -> Self {
        let mut s = Sector {
            rng: seed.rng(),
            start,
            width,
            mass: 0.0,
            next_r: 0.0,
            next_phi: 0.0,
        };
        s.advance(lambda);
        s
    }

    fn advance(&mut self, lambda: f64) {
        let u: f64 = self.rng.random();
        self.mass += -(1.0 - u).ln();
        self.next_r = 2.0 * (self.mass / (2.0 * lambda * self.width)).sqrt().asinh();
        self.next_phi = self.start + self.width * self.rng.random::<f64>();
    }

    /// Smallest angular gap between `theta` and this sector.
    fn gap(&self, theta: f64) -> f64 {
        let rel = (theta - self.start).rem_euclid(TAU);
        if rel <= self.width {
            0.0
        } else {
            (rel - self.width).min(TAU - rel)
        }
    }
}

/// Reach of `B(v, |v|)` along directions at angular gap `gap` from `v`.
fn flower_reach(rho: f64, gap: f64) -> f64 {
    if gap >= FRAC_PI_2 {
        return 0.0;
    }
    let t = rho.tanh() * gap.cos();
    if t >= 1.0 {
        2.0 * rho
    } else {
        (2.0 * t.atanh()).min(2.0 * rho)
    }
}

pub fn typical_cell(lambda: f64, seed: Seed) -> Result<ConvexCell, VoronoiError> {
    typical_cell_with(lambda, seed, &TypicalCellConfig::default()).map(|t| t.cell)
}

pub fn typical_cell_with(
    lambda: f64,
    seed: Seed,
    config: &TypicalCellConfig,
) -> Result<TypicalCell, VoronoiError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(VoronoiError::Sample(SampleError::BadIntensity(lambda)));
    }
    let m = config.sectors.max(1);
    let width = TAU / m as f64;
    let mut sectors: Vec<Sector> = (0..m)
        .map(|k| Sector::new(seed.child(k as u64), k as f64 * width, width, lambda))
        .collect();
    let origin = HPoint::ORIGIN;
    let mut poly = ClipPolygon::frame();
    let mut sites = Vec::new();
    let mut targets = vec![f64::INFINITY; m];
    let mut explored: f64 = 0.0;
    loop {
        let pick = sectors
            .iter()
            .enumerate()
            .filter(|(k, s)| s.next_r <= targets[*k])
            .min_by(|a, b| a.1.next_r.total_cmp(&b.1.next_r))
            .map(|(k, _)| k);
        let Some(k) = pick else { break };
        let s = &mut sectors[k];
        if s.next_r > config.radius_cap {
            return Err(VoronoiError::WindowCap {
                needed: if poly.is_bounded() { targets[k] } else { s.next_r },
                cap: config.radius_cap,
            });
        }
        let q = HPoint::from_polar(s.next_r, s.next_phi);
        explored = explored.max(s.next_r);
        s.advance(lambda);
        let h = bisector(&origin, &q)?;
        let label = sites.len();
        sites.push(q);
        if poly.clip(&h, label) && poly.is_bounded() {
            let verts: Vec<(f64, f64)> = poly
                .points()
                .expect("bounded")
                .iter()
                .map(|v| (v.radius(), v.angle()))
                .collect();
            for (target, sector) in targets.iter_mut().zip(&sectors) {
                *target = verts
                    .iter()
                    .map(|&(rho, theta)| flower_reach(rho, sector.gap(theta)))
                    .fold(0.0, f64::max);
            }
        }
    }
    let cell = poly
        .into_cell(origin)
        .map_err(|_| VoronoiError::UnboundedCell)?;
    Ok(TypicalCell {
        cell,
        sites,
        explored_radius: explored,
    })
}
