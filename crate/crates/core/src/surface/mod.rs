//! The Bolza surface: a genus-2 quotient of the plane by a Fuchsian group.
//!
//! The fundamental domain is the regular octagon centred at the origin with
//! interior angles `pi/4`. Opposite sides are paired by translations of
//! length `2 arcosh(1 + sqrt 2)` along the axes through the side midpoints.

mod angular;
mod tess;

pub use angular::{angular_set, angular_set_from_walls, dirichlet_walls, polar_about, AngularSet};
pub use tess::{
    coloring_experiment, color_tessellation, surface_voronoi, tessellate_surface, variance_identity,
    ColoringOutcome, VarianceCheck, MIN_INTENSITY, MIN_TRIALS,
};

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypmath::{cosh_dist, dist, ConvexCell, HPoint, HalfSpace, Isometry};
use crate::sampler::SamplingDomain;
use crate::voronoi::{cell_of, VoronoiError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("translate cutoff {cutoff} is below the required {needed:.3}")]
    CutoffTooSmall { needed: f64, cutoff: f64 },
    #[error("intensity {0} is below the surface floor 0.25")]
    IntensityTooSmall(f64),
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: usize, got: usize },
    #[error(transparent)]
    Voronoi(#[from] VoronoiError),
}

/// Half the systole: the inradius of the octagon.
pub fn bolza_inradius() -> f64 {
    (1.0 + SQRT_2).acosh()
}

pub fn bolza_systole() -> f64 {
    2.0 * bolza_inradius()
}

/// Distance from the centre to an octagon vertex.
pub fn bolza_circumradius() -> f64 {
    ((1.0 + SQRT_2) * (1.0 + SQRT_2)).acosh()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuchsianGroup {
    /// `generators[k]` pairs side `k + 4` with side `k`; `generators[(k + 4) % 8]` is its inverse.
    pub generators: Vec<Isometry>,
    pub label: String,
}

/// A group element with its orbit point `g(O)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Translate {
    pub iso: Isometry,
    pub image: HPoint,
    /// `d(O, g(O))`.
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub group: FuchsianGroup,
    pub domain: ConvexCell,
    pub genus: u32,
    pub area: f64,
    /// Sorted by `radius`; the identity comes first.
    pub translates: Vec<Translate>,
    pub cutoff: f64,
}

pub const DEFAULT_CUTOFF: f64 = 11.5;

pub fn bolza() -> SurfaceModel {
    bolza_with_cutoff(DEFAULT_CUTOFF)
}

pub fn bolza_with_cutoff(cutoff: f64) -> SurfaceModel {
    let a = bolza_inradius();
    let generators: Vec<Isometry> = (0..8)
        .map(|k| Isometry::translation(2.0 * a, k as f64 * FRAC_PI_4))
        .collect();
    let images: Vec<HPoint> = generators.iter().map(|g| g.apply(&HPoint::ORIGIN)).collect();
    let domain = cell_of(&HPoint::ORIGIN, &images).expect("octagon is bounded");
    let area = domain.area().expect("octagon area");
    let group = FuchsianGroup {
        generators,
        label: "bolza".into(),
    };
    let translates = enumerate_translates(&group, cutoff);
    SurfaceModel {
        group,
        domain,
        genus: 2,
        area,
        translates,
        cutoff,
    }
}

/// All group elements with `d(O, g(O)) <= cutoff`, by breadth-first search over
/// adjacent tiles `g -> g s`.
///
/// A geodesic from `O` to `g(O)` crosses only tiles whose centres lie within
/// one circumradius of it, so pruning at `cutoff + circumradius` loses nothing.
pub fn enumerate_translates(group: &FuchsianGroup, cutoff: f64) -> Vec<Translate> {
    let prune = cutoff + bolza_circumradius() + 1e-6;
    let cosh_prune = prune.cosh();
    let mut found: Vec<Translate> = vec![Translate {
        iso: Isometry::IDENTITY,
        image: HPoint::ORIGIN,
        radius: 0.0,
    }];
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: &HPoint| (p.x1.floor() as i64, p.x2.floor() as i64);
    grid.entry(key(&HPoint::ORIGIN)).or_default().push(0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            let base = found[i].iso;
            for s in &group.generators {
                let g = base.compose(s);
                let image = g.apply(&HPoint::ORIGIN);
                if image.x0 > cosh_prune {
                    continue;
                }
                let (kx, ky) = key(&image);
                // distinct orbit points are over 4 apart in ambient coordinates, so
                // a relative match identifies the same element despite rounding
                let same = |q: &HPoint| {
                    let d = (q.x0 - image.x0).abs().max((q.x1 - image.x1).abs()).max((q.x2 - image.x2).abs());
                    d <= 1e-6 * image.x0
                };
                let seen = (-1..=1).any(|dx| {
                    (-1..=1).any(|dy| {
                        grid.get(&(kx + dx, ky + dy))
                            .is_some_and(|v| v.iter().any(|&j| same(&found[j].image)))
                    })
                });
                if seen {
                    continue;
                }
                let idx = found.len();
                found.push(Translate {
                    iso: g,
                    image,
                    radius: image.radius(),
                });
                grid.entry((kx, ky)).or_default().push(idx);
                next.push(idx);
            }
        }
        frontier = next;
    }
    let mut out: Vec<Translate> = found.into_iter().filter(|t| t.radius <= cutoff).collect();
    out.sort_by(|a, b| a.radius.total_cmp(&b.radius).then(a.image.angle().total_cmp(&b.image.angle())));
    out
}

impl SurfaceModel {
    pub fn walls(&self) -> &[HalfSpace] {
        &self.domain.walls
    }

    /// Minimum translation length over the non-identity translates.
    pub fn systole(&self) -> f64 {
        self.translates
            .iter()
            .skip(1)
            .map(|t| t.iso.translation_length())
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the generator whose side carries wall `k` of the domain.
    fn generator_for_wall(&self, k: usize) -> usize {
        self.domain.neighbors[k]
    }

    /// Translates of `p` within distance `reach`, as `(image, translate index)`.
    pub fn lifts_within(&self, p: &HPoint, center: &HPoint, reach: f64) -> Vec<(HPoint, usize)> {
        let bound = center.radius() + p.radius() + reach;
        let ch = reach.cosh();
        self.translates
            .iter()
            .enumerate()
            .take_while(|(_, t)| t.radius <= bound)
            .filter_map(|(k, t)| {
                let q = t.iso.apply(p);
                (cosh_dist(center, &q) <= ch).then_some((q, k))
            })
            .collect()
    }
}

impl SurfaceModel {
    /// Cell of `center` among all lifts of `sites`, except the untranslated
    /// `sites[skip]`; `neighbors` of the result index into `sites`.
    ///
    /// The lift radius grows until it exceeds twice the cell's circumradius,
    /// which certifies the cell.
    pub fn lifted_cell(
        &self,
        center: &HPoint,
        sites: &[HPoint],
        skip: Option<usize>,
        start: f64,
    ) -> Result<ConvexCell, SurfaceError> {
        let far = sites.iter().map(|p| p.radius()).fold(0.0, f64::max);
        let mut reach = start;
        loop {
            let needed = center.radius() + far + reach;
            if needed > self.cutoff {
                return Err(SurfaceError::CutoffTooSmall {
                    needed,
                    cutoff: self.cutoff,
                });
            }
            let mut lifts = Vec::new();
            let mut owner = Vec::new();
            for (j, p) in sites.iter().enumerate() {
                for (q, k) in self.lifts_within(p, center, reach) {
                    if k == 0 && skip == Some(j) {
                        continue;
                    }
                    lifts.push(q);
                    owner.push(j);
                }
            }
            match cell_of(center, &lifts) {
                Ok(mut cell) => {
                    let rho = cell.max_vertex_distance();
                    if 2.0 * rho <= reach {
                        for n in cell.neighbors.iter_mut() {
                            *n = owner[*n];
                        }
                        return Ok(cell);
                    }
                    reach = (2.0 * rho * 1.001).min(self.cutoff - center.radius() - far).max(reach * 1.001);
                }
                Err(VoronoiError::UnboundedCell) => reach *= 1.5,
                Err(e) => return Err(e.into()),
            }
        }
    }
}

impl SamplingDomain for SurfaceModel {
    fn contains(&self, p: &HPoint) -> bool {
        self.domain.contains(p)
    }

    fn area(&self) -> f64 {
        self.area
    }

    fn covering_radius(&self) -> f64 {
        bolza_circumradius() + 1e-9
    }

    fn label(&self) -> String {
        self.group.label.clone()
    }
}

/// A point of the surface, represented in the closed fundamental octagon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub rep: HPoint,
}

impl SurfacePoint {
    /// Moves `p` into the octagon by side pairings. Points on a wall `k >= 4`
    /// are moved to the paired wall `k - 4`.
    pub fn reduce(p: &HPoint, surf: &SurfaceModel) -> SurfacePoint {
        let mut q = *p;
        let walls = surf.walls();
        for _ in 0..1000 {
            let worst = walls
                .iter()
                .enumerate()
                .map(|(k, w)| (k, w.eval(&q)))
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                .expect("eight walls");
            if worst.1 <= 1e-12 * q.x0 {
                break;
            }
            // the wall generated by g(O) is crossed back by g^-1
            let g = surf.group.generators[surf.generator_for_wall(worst.0)];
            q = g.inverse().apply(&q);
        }
        for (k, w) in walls.iter().enumerate() {
            let side = surf.generator_for_wall(k);
            if side >= 4 && w.eval(&q).abs() <= 1e-12 * q.x0 {
                q = surf.group.generators[side].inverse().apply(&q);
                break;
            }
        }
        SurfacePoint { rep: q }
    }

    pub fn is_in_domain(&self, surf: &SurfaceModel, tol: f64) -> bool {
        surf.walls().iter().all(|w| w.eval(&self.rep) <= tol * self.rep.x0)
    }
}

/// Surface distance: the shortest distance between `x` and a translate of `y`.
pub fn quotient_distance(
    x: &SurfacePoint,
    y: &SurfacePoint,
    surf: &SurfaceModel,
) -> Result<f64, SurfaceError> {
    // any two surface points are within twice the circumradius
    let needed = x.rep.radius() + y.rep.radius() + 2.0 * bolza_circumradius();
    if needed > surf.cutoff {
        return Err(SurfaceError::CutoffTooSmall {
            needed,
            cutoff: surf.cutoff,
        });
    }
    let mut best = dist(&x.rep, &y.rep);
    let base = x.rep.radius() + y.rep.radius();
    for t in surf.translates.iter().skip(1) {
        if t.radius > base + best {
            break;
        }
        best = best.min(dist(&x.rep, &t.iso.apply(&y.rep)));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmath::Tolerances;
    use crate::sampler::{uniform_in_domain, Seed};
    use std::f64::consts::{FRAC_PI_8, PI};

    #[test]
    fn octagon_shape() {
        let s = bolza();
        assert_eq!(s.domain.len(), 8);
        s.domain.check(&Tolerances::DEFAULT).unwrap();
        assert!((s.area - 4.0 * PI).abs() < 1e-6);
        for a in s.domain.interior_angles() {
            assert!((a - FRAC_PI_4).abs() < 1e-9);
        }
        for v in &s.domain.vertices {
            assert!((v.radius() - bolza_circumradius()).abs() < 1e-9);
            let k = ((v.angle() - FRAC_PI_8) / FRAC_PI_4).round();
            assert!((v.angle() - FRAC_PI_8 - k * FRAC_PI_4).abs() < 1e-9);
        }
    }

    #[test]
    fn generators_pair_opposite_sides() {
        let s = bolza();
        let g = &s.group.generators;
        for k in 0..8 {
            assert!(g[k].compose(&g[(k + 4) % 8]).max_abs_diff(&Isometry::IDENTITY) < 1e-9);
            // side k + 4 is carried onto side k
            let w = s.domain.walls[s.domain.neighbors.iter().position(|&n| n == (k + 4) % 8).unwrap()];
            let (p, q) = w.boundary_points(0.3);
            let target = s.domain.walls[s.domain.neighbors.iter().position(|&n| n == k).unwrap()];
            for x in [p, q] {
                assert!(target.eval(&g[k].apply(&x)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn translates_are_a_group_ball() {
        let s = bolza_with_cutoff(8.0);
        // closed under inverses
        for t in &s.translates {
            let inv = t.iso.inverse();
            let img = inv.apply(&HPoint::ORIGIN);
            assert!(s.translates.iter().any(|u| dist(&u.image, &img) < 1e-6));
        }
        // orbit count is close to area(B_R) / area(S)
        let expected = crate::hypmath::ball_area(8.0) / (4.0 * PI);
        let n = s.translates.len() as f64;
        assert!(n > 0.7 * expected && n < 1.3 * expected, "{n} vs {expected}");
        // identity only once; images pairwise at least a systole apart
        assert!(s.translates.iter().skip(1).all(|t| t.radius > bolza_systole() - 1e-9));
    }

    #[test]
    fn systole_by_brute_force() {
        // independent oracle: all words of length <= 8 in the generators, minimum translation length
        let s = bolza_with_cutoff(6.0);
        let g = &s.group.generators;
        let mut best = f64::INFINITY;
        let mut layer = vec![Isometry::IDENTITY];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &layer {
                for h in g {
                    let x = w.compose(h);
                    if x.max_abs_diff(&Isometry::IDENTITY) > 1e-6 {
                        best = best.min(x.translation_length());
                    }
                    next.push(x);
                }
            }
            layer = next;
        }
        assert!((best - bolza_systole()).abs() < 1e-6);
        assert!((s.systole() - bolza_systole()).abs() < 1e-6);
        assert!((bolza_systole() - 3.057).abs() < 1e-3);
    }

    #[test]
    fn reduce_lands_in_domain() {
        let s = bolza();
        let mut rng = Seed::new(1).rng();
        for _ in 0..200 {
            let p = crate::sampler::uniform_in_disk(&mut rng, 6.0);
            let r = SurfacePoint::reduce(&p, &s);
            assert!(r.is_in_domain(&s, 1e-9));
            assert!(quotient_distance(&r, &SurfacePoint { rep: r.rep }, &s).unwrap() < 1e-12);
        }
    }

    #[test]
    fn quotient_distance_basics() {
        let s = bolza();
        let o = SurfacePoint { rep: HPoint::ORIGIN };
        assert_eq!(quotient_distance(&o, &o, &s).unwrap(), 0.0);
        let g0 = s.group.generators[0].apply(&HPoint::ORIGIN);
        assert!((dist(&HPoint::ORIGIN, &g0) - bolza_systole()).abs() < 1e-9);
        let back = SurfacePoint::reduce(&g0, &s);
        assert!(quotient_distance(&o, &back, &s).unwrap() < 1e-9);
        // points on paired sides are the same surface point
        let w = s.domain.walls[0];
        let (p, _) = w.boundary_points(0.2);
        let side = s.domain.neighbors[0];
        let q = s.group.generators[side].inverse().apply(&p);
        let d = quotient_distance(&SurfacePoint { rep: p }, &SurfacePoint { rep: q }, &s).unwrap();
        assert!(d < 1e-9);
    }

    #[test]
    fn quotient_distance_is_a_metric() {
        let s = bolza();
        let mut rng = Seed::new(8).rng();
        let (pts, stats) = uniform_in_domain(&s, 300, &mut rng);
        assert!(stats.acceptance_rate() > 0.3);
        let pts: Vec<SurfacePoint> = pts.into_iter().map(|rep| SurfacePoint { rep }).collect();
        for t in 0..100 {
            let (x, y, z) = (&pts[3 * t], &pts[3 * t + 1], &pts[3 * t + 2]);
            let dxy = quotient_distance(x, y, &s).unwrap();
            let dyx = quotient_distance(y, x, &s).unwrap();
            let dyz = quotient_distance(y, z, &s).unwrap();
            let dxz = quotient_distance(x, z, &s).unwrap();
            assert!((dxy - dyx).abs() < 1e-9);
            assert!(dxz <= dxy + dyz + 1e-8);
            assert!(dxy <= dist(&x.rep, &y.rep) + 1e-12);
        }
    }

    #[test]
    fn cutoff_is_asserted() {
        let s = bolza_with_cutoff(4.0);
        let x = SurfacePoint { rep: HPoint::ORIGIN };
        assert!(matches!(
            quotient_distance(&x, &x, &s),
            Err(SurfaceError::CutoffTooSmall { .. })
        ));
    }
}
