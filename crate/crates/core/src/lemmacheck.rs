//! Numerical checks of the quantitative steps in the small-intensity argument.
//!
//! Every check is pure given its seed and returns a [`LemmaReport`] whose
//! verdict is computed, never assumed.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_2_PI, PI, TAU};
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hypmath::{dist, mcross, mdot, ConvexCell, HPoint, Isometry, MVec};
use crate::hypmath::{axpby, scale};
use crate::quadrature::integrate;
use crate::sampler::Seed;
use crate::stats::mean_var;

/// Probability measure on `[0, 2 pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AngleMeasure {
    /// Point masses `(theta, weight)`.
    Atoms(Vec<(f64, f64)>),
    /// Cell masses on the midpoint grid `theta_i = (i + 1/2) 2 pi / n`.
    Grid(Vec<f64>),
}

/// Grid size used by [`AngleMeasure::from_density`].
pub const DENSITY_GRID: usize = 8192;

impl AngleMeasure {
    /// Normalized atoms; panics on a nonpositive weight.
    pub fn atoms(atoms: Vec<(f64, f64)>) -> Self {
        assert!(atoms.iter().all(|&(_, w)| w > 0.0), "weights must be positive");
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        AngleMeasure::Atoms(atoms.into_iter().map(|(t, w)| (t.rem_euclid(TAU), w / total)).collect())
    }

    pub fn from_density(f: impl Fn(f64) -> f64) -> Self {
        let n = DENSITY_GRID;
        let w: Vec<f64> = (0..n).map(|i| f((i as f64 + 0.5) * TAU / n as f64).max(0.0)).collect();
        let total: f64 = w.iter().sum();
        AngleMeasure::Grid(w.into_iter().map(|x| x / total).collect())
    }

    pub fn uniform() -> Self {
        Self::from_density(|_| 1.0)
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            AngleMeasure::Atoms(a) => a.iter().map(|x| x.1).sum(),
            AngleMeasure::Grid(w) => w.iter().sum(),
        }
    }

    pub fn rotated(&self, alpha: f64) -> Self {
        match self {
            AngleMeasure::Atoms(a) => {
                AngleMeasure::Atoms(a.iter().map(|&(t, w)| ((t + alpha).rem_euclid(TAU), w)).collect())
            }
            AngleMeasure::Grid(_) => panic!("grid measures rotate only by grid steps"),
        }
    }
}

/// `int int |sin((t1 - t2)/2)| dnu dnu`.
pub fn sine_kernel(nu: &AngleMeasure) -> f64 {
    match nu {
        AngleMeasure::Atoms(a) => {
            let mut s = 0.0;
            for &(t1, w1) in a {
                for &(t2, w2) in a {
                    s += w1 * w2 * ((t1 - t2) / 2.0).sin().abs();
                }
            }
            s
        }
        AngleMeasure::Grid(w) => {
            let n = w.len();
            let kernel: Vec<f64> = (0..n).map(|k| (PI * k as f64 / n as f64).sin()).collect();
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut s = 0.0;
                    for (j, wj) in w.iter().enumerate() {
                        s += wj * kernel[i.abs_diff(j)];
                    }
                    w[i] * s
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum()
        }
    }
}

/// Random atomic measure with between 1 and `max_atoms` atoms.
pub fn random_atomic_measure<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> AngleMeasure {
    let k = rng.random_range(1..=max_atoms);
    AngleMeasure::atoms(
        (0..k)
            .map(|_| (rng.random::<f64>() * TAU, 1.0 - rng.random::<f64>()))
            .collect(),
    )
}

/// Angular measure of `{theta : a <= d(y, [r; theta]) <= a + eps}` for `d = d(x, y)`.
fn ring_angle(d: f64, r: f64, a: f64, eps: f64) -> f64 {
    let den = d.sinh() * r.sinh();
    let base = d.cosh() * r.cosh();
    let lo = ((base - (a + eps).cosh()) / den).clamp(-1.0, 1.0);
    let hi = ((base - a.cosh()) / den).clamp(-1.0, 1.0);
    2.0 * (lo.acos() - hi.acos()).max(0.0)
}

/// Area of the intersection of the rings `a <= d(., x) <= a + eps` and `a <= d(., y) <= a + eps`.
///
/// Polar reduction about `x`: integrates `sinh r` times the angular measure
/// from [`ring_angle`], split where the cosine bounds reach `+-1`.
pub fn ring_intersection_area(x: &HPoint, y: &HPoint, a: f64, eps: f64) -> f64 {
    assert!(a > 0.0 && eps > 0.0, "radii must be positive");
    let d = dist(x, y);
    assert!(d > 0.0, "centres must differ");
    if d > 2.0 * (a + eps) {
        return 0.0;
    }
    let (lo, hi) = (a, a + eps);
    let mut cuts = vec![lo, hi];
    for c in [a.cosh(), (a + eps).cosh()] {
        let s = c.acosh();
        cuts.extend([d + s, d - s, s - d]);
    }
    cuts.retain(|&t| t >= lo && t <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let tol = 1e-11 * eps * TAU * hi.sinh();
    cuts.windows(2)
        .map(|w| integrate(|r: f64| r.sinh() * ring_angle(d, r, a, eps), w[0], w[1], tol, 4000).value)
        .sum()
}

/// Rejection Monte-Carlo version of [`ring_intersection_area`]: `(estimate, stderr)`.
pub fn ring_intersection_mc(x: &HPoint, y: &HPoint, a: f64, eps: f64, samples: usize, seed: Seed) -> (f64, f64) {
    let mut rng = seed.rng();
    let (c0, c1) = (a.cosh(), (a + eps).cosh());
    let ring = TAU * (c1 - c0);
    let to_x = Isometry::origin_to(x);
    let hits = (0..samples)
        .filter(|_| {
            let r = (c0 + rng.random::<f64>() * (c1 - c0)).acosh();
            let p = to_x.apply(&HPoint::from_polar(r, rng.random::<f64>() * TAU));
            let dy = dist(&p, y);
            (a..=a + eps).contains(&dy)
        })
        .count();
    let f = hits as f64 / samples as f64;
    (ring * f, ring * (f * (1.0 - f) / samples as f64).sqrt())
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, _) = mean_var(&lx);
    let (my, _) = mean_var(&ly);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Probe points of the closed ball `B_eps(O)`: the centre plus 64 angles times 8 radii.
fn probes(eps: f64) -> Vec<MVec> {
    let mut out = vec![HPoint::ORIGIN.vec()];
    for k in 1..=8 {
        for j in 0..64 {
            out.push(HPoint::from_polar(eps * k as f64 / 8.0, TAU * j as f64 / 64.0).vec());
        }
    }
    out
}

fn member_with(z: &HPoint, y: &HPoint, probes: &[MVec]) -> bool {
    if z.vec()[0] < y.vec()[0] {
        return false;
    }
    // sign of cosh d(p, z) - cosh d(p, y) is the sign of <p, y - z>
    let w = axpby(1.0, &y.vec(), -1.0, &z.vec());
    let (mut pos, mut neg) = (false, false);
    for p in probes {
        let s = mdot(p, &w);
        pos |= s > 0.0;
        neg |= s < 0.0;
        if pos && neg {
            return true;
        }
    }
    false
}

/// Whether `z` is at least as far from the origin as `y` and the bisector of
/// `y` and `z` meets `B_eps(O)`.
///
/// Decided on a finite probe set of 513 points, so it can only miss members
/// whose bisector clips the ball between probes.
pub fn a_eps_membership(z: &HPoint, y: &HPoint, eps: f64) -> bool {
    member_with(z, y, &probes(eps))
}

/// Upper end of the band allowed by the inclusion at angular offset `dtheta`.
pub fn inclusion_band(eps: f64, delta: f64, dtheta: f64) -> f64 {
    2.0 * (1.0 + delta) * (dtheta / 2.0).sin().abs() * eps
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub params: BTreeMap<String, f64>,
    pub verdict: bool,
    /// Largest excess over the tested bound; nonpositive when the bound holds.
    pub max_slack: f64,
    pub samples: usize,
    pub seed: Seed,
    pub members: usize,
    pub violations: usize,
    pub note: String,
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(
            f,
            "{:<28} {} [{}] max_slack={:.3e} samples={} members={} violations={} seed={}",
            self.lemma,
            if self.verdict { "PASS" } else { "FAIL" },
            params.join(", "),
            self.max_slack,
            self.samples,
            self.members,
            self.violations,
            self.seed,
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Samples `samples` points uniformly in the ring `r <= r' <= r + 4 eps`, keeps
/// the members of `A^eps(0, y)` for `y = [r; theta]`, and tests the inclusion
/// `r' - r <= 2 (1 + delta) |sin((theta' - theta)/2)| eps` on each member.
///
/// The couronne bound `r' <= r + 2 eps` is checked as well.
pub fn inclusion_check(r: f64, eps: f64, delta: f64, samples: usize, seed: Seed) -> LemmaReport {
    let mut rng = seed.rng();
    let theta = rng.random::<f64>() * TAU;
    let y = HPoint::from_polar(r, theta);
    let probes = probes(eps);
    let (c0, c1) = (r.cosh(), (r + 4.0 * eps).cosh());
    let candidates: Vec<(f64, f64)> = (0..samples)
        .map(|_| {
            let rr = (c0 + rng.random::<f64>() * (c1 - c0)).acosh().max(r);
            (rr, rng.random::<f64>() * TAU)
        })
        .collect();
    let results: Vec<Option<(f64, bool)>> = candidates
        .par_iter()
        .map(|&(rr, t)| {
            let z = HPoint::from_polar(rr, t);
            member_with(&z, &y, &probes).then(|| {
                let excess = (rr - r) - inclusion_band(eps, delta, t - theta);
                (excess, rr - r > 2.0 * eps)
            })
        })
        .collect();
    let mut members = 0;
    let mut violations = 0;
    let mut max_slack = f64::NEG_INFINITY;
    for (excess, outside) in results.into_iter().flatten() {
        members += 1;
        if excess > 0.0 || outside {
            violations += 1;
        }
        max_slack = max_slack.max(excess);
    }
    LemmaReport {
        lemma: "inclusion".into(),
        params: params(&[("r", r), ("eps", eps), ("delta", delta), ("theta", theta)]),
        verdict: violations == 0 && members > 0,
        max_slack,
        samples,
        seed,
        members,
        violations,
        note: "membership decided on 513 probes of the eps-ball".into(),
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Piece of the eps-neighbourhood of a polygonal path.
enum Piece {
    /// Fermi rectangle `[0, len] x [-eps, eps]` along the segment from `a`.
    Strip { a: MVec, b: MVec, tangent: MVec, normal: MVec, len: f64 },
    Disk { c: MVec },
}

impl Piece {
    fn area(&self, eps: f64) -> f64 {
        match self {
            Piece::Strip { len, .. } => 2.0 * len * eps.sinh(),
            Piece::Disk { .. } => TAU * (eps.cosh() - 1.0),
        }
    }

    fn contains(&self, p: &MVec, eps: f64) -> bool {
        match self {
            Piece::Strip { a, b, normal, len, .. } => {
                if mdot(p, normal).abs() > eps.sinh() {
                    return false;
                }
                // the foot of the perpendicular lies on the segment iff both
                // base angles are at most pi/2
                let (ca, cb, cab) = (-mdot(p, a), -mdot(p, b), len.cosh());
                cb <= cab * ca && ca <= cab * cb
            }
            Piece::Disk { c } => -mdot(p, c) <= eps.cosh(),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, eps: f64) -> MVec {
        match self {
            Piece::Strip { a, tangent, normal, len, .. } => {
                let t = rng.random::<f64>() * len;
                let s = ((2.0 * rng.random::<f64>() - 1.0) * eps.sinh()).asinh();
                let g = axpby(t.cosh(), a, t.sinh(), tangent);
                axpby(s.cosh(), &g, s.sinh(), normal)
            }
            Piece::Disk { c } => {
                let u: f64 = rng.random();
                let r = (1.0 + u * (eps.cosh() - 1.0)).acosh();
                let p = HPoint::from_polar(r, rng.random::<f64>() * TAU);
                Isometry::origin_to(&HPoint::from_timelike(c).expect("centre")).apply(&p).vec()
            }
        }
    }
}

fn pieces(path: &[(HPoint, HPoint)]) -> Vec<Piece> {
    let mut out = Vec::new();
    for (p, q) in path {
        let (a, b) = (p.vec(), q.vec());
        let len = dist(p, q);
        let tangent = scale(&axpby(1.0, &b, -len.cosh(), &a), 1.0 / len.sinh());
        let n = mcross(&a, &b);
        let normal = scale(&n, 1.0 / mdot(&n, &n).sqrt());
        out.push(Piece::Strip { a, b, tangent, normal, len });
    }
    let mut ends: Vec<MVec> = path.iter().flat_map(|(p, q)| [p.vec(), q.vec()]).collect();
    ends.dedup_by(|x, y| (0..3).all(|k| (x[k] - y[k]).abs() < 1e-12));
    if ends.len() > 1 && (0..3).all(|k| (ends[0][k] - ends[ends.len() - 1][k]).abs() < 1e-12) {
        ends.pop();
    }
    out.extend(ends.into_iter().map(|c| Piece::Disk { c }));
    out
}

/// Area of the eps-neighbourhood of a union of geodesic segments.
///
/// The neighbourhood is the union of one Fermi strip per segment and one disk
/// per endpoint. Each piece is sampled exactly and a point is weighted by the
/// reciprocal of the number of pieces containing it, so overlaps count once.
pub fn thickened_area(path: &[(HPoint, HPoint)], eps: f64, samples: usize, seed: Seed) -> Estimate {
    let pieces = pieces(path);
    let areas: Vec<f64> = pieces.iter().map(|p| p.area(eps)).collect();
    let total: f64 = areas.iter().sum();
    let parts: Vec<(f64, f64)> = (0..pieces.len())
        .into_par_iter()
        .map(|k| {
            let n = ((samples as f64 * areas[k] / total).round() as usize).max(2);
            let mut rng = seed.with_stream(k as u64).rng();
            let w: Vec<f64> = (0..n)
                .map(|_| {
                    let p = pieces[k].sample(&mut rng, eps);
                    let m = 1 + pieces
                        .iter()
                        .enumerate()
                        .filter(|&(j, q)| j != k && q.contains(&p, eps))
                        .count();
                    1.0 / m as f64
                })
                .collect();
            let (mean, var) = mean_var(&w);
            (areas[k] * mean, areas[k] * areas[k] * var / n as f64)
        })
        .collect();
    Estimate {
        value: parts.iter().map(|p| p.0).sum(),
        stderr: parts.iter().map(|p| p.1).sum::<f64>().sqrt(),
    }
}

/// `|eps-neighbourhood of the boundary| / (2 eps)`, which tends to the perimeter.
pub fn thickening_perimeter(cell: &ConvexCell, eps: f64, samples: usize, seed: Seed) -> Estimate {
    assert!(eps > 0.0 && eps <= 0.05, "eps must lie in (0, 0.05]");
    let path: Vec<(HPoint, HPoint)> = cell.edges().map(|(a, b, _)| (*a, *b)).collect();
    let e = thickened_area(&path, eps, samples, seed);
    Estimate {
        value: e.value / (2.0 * eps),
        stderr: e.stderr / (2.0 * eps),
    }
}

/// `sine_kernel` on the uniform law and on `measures` random atomic laws.
pub fn sine_kernel_report(measures: usize, seed: Seed) -> LemmaReport {
    let uniform = sine_kernel(&AngleMeasure::uniform());
    let worst = (0..measures as u64)
        .into_par_iter()
        .map(|k| sine_kernel(&random_atomic_measure(&mut seed.with_stream(k).rng(), 64)))
        .reduce(|| 0.0, f64::max);
    let violations = usize::from((uniform - FRAC_2_PI).abs() > 1e-6) + usize::from(worst > FRAC_2_PI + 1e-9);
    LemmaReport {
        lemma: "sine_kernel".into(),
        params: params(&[("uniform", uniform), ("max_atomic", worst), ("max_atoms", 64.0)]),
        verdict: violations == 0,
        max_slack: worst - FRAC_2_PI,
        samples: measures,
        seed,
        members: measures,
        violations,
        note: String::new(),
    }
}

pub const THIN_RING_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

pub fn thin_ring_report(a: f64, d: f64) -> LemmaReport {
    let x = HPoint::ORIGIN;
    let y = HPoint::from_polar(d, 0.0);
    let areas: Vec<f64> = THIN_RING_EPS.iter().map(|&e| ring_intersection_area(&x, &y, a, e)).collect();
    let slope = log_log_slope(&THIN_RING_EPS, &areas);
    LemmaReport {
        lemma: "thin_rings".into(),
        params: params(&[("a", a), ("d", d), ("slope", slope)]),
        verdict: slope >= 1.4,
        max_slack: 1.4 - slope,
        samples: 0,
        seed: Seed::new(0),
        members: areas.len(),
        violations: usize::from(slope < 1.4),
        note: "deterministic quadrature".into(),
    }
}

/// Inclusion at a band that is too tight; the verdict is true when violations are found.
pub fn negative_control(r: f64, eps: f64, samples: usize, seed: Seed) -> LemmaReport {
    let mut rep = inclusion_check(r, eps, -0.5, samples, seed);
    rep.lemma = "inclusion_negative_control".into();
    rep.verdict = rep.violations > 0;
    rep.note = "expected to find violations".into();
    rep
}

pub fn thickening_report(cell: &ConvexCell, eps: f64, samples: usize, seed: Seed) -> LemmaReport {
    let e = thickening_perimeter(cell, eps, samples, seed);
    let p = cell.perimeter();
    let allowed = 3.0 * e.stderr + 5.0 * eps * cell.len() as f64;
    let excess = (e.value - p).abs() - allowed;
    LemmaReport {
        lemma: "thickening".into(),
        params: params(&[("eps", eps), ("estimate", e.value), ("stderr", e.stderr), ("perimeter", p)]),
        verdict: excess <= 0.0,
        max_slack: excess,
        samples,
        seed,
        members: cell.len(),
        violations: usize::from(excess > 0.0),
        note: String::new(),
    }
}

/// The full suite with the default parameters.
pub fn lemma_suite(samples: usize, seed: Seed) -> Vec<LemmaReport> {
    let mut out = vec![sine_kernel_report(1000, seed.child(0)), thin_ring_report(2.0, 1.0)];
    let mut k = 1;
    for r in [5.0, 8.0] {
        for eps in [1e-2, 1e-3] {
            out.push(inclusion_check(r, eps, 0.1, samples, seed.child(k)));
            k += 1;
        }
    }
    out.push(negative_control(5.0, 0.01, samples, seed.child(k)));
    let cell = crate::voronoi::typical_cell(1.0, seed.child(k + 1)).expect("typical cell");
    out.push(thickening_report(&cell, 0.01, 1_000_000, seed.child(k + 2)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_kernel_examples() {
        assert!((sine_kernel(&AngleMeasure::uniform()) - FRAC_2_PI).abs() < 1e-8);
        assert_eq!(sine_kernel(&AngleMeasure::atoms(vec![(0.0, 1.0)])), 0.0);
        let two = AngleMeasure::atoms(vec![(0.0, 0.5), (PI, 0.5)]);
        assert!((sine_kernel(&two) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sine_kernel_bound_and_rotation() {
        let mut rng = Seed::new(9).rng();
        for _ in 0..1000 {
            let nu = random_atomic_measure(&mut rng, 64);
            assert!((nu.total_mass() - 1.0).abs() < 1e-12);
            let k = sine_kernel(&nu);
            assert!((0.0..=FRAC_2_PI + 1e-9).contains(&k));
            let alpha = rng.random::<f64>() * TAU;
            assert!((sine_kernel(&nu.rotated(alpha)) - k).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_area_far_apart_is_zero() {
        let x = HPoint::ORIGIN;
        let y = HPoint::from_polar(4.5, 1.0);
        assert_eq!(ring_intersection_area(&x, &y, 2.0, 0.1), 0.0);
    }

    #[test]
    fn ring_area_matches_monte_carlo_and_is_symmetric() {
        let x = HPoint::from_polar(0.3, 2.0);
        let y = HPoint::from_polar(0.9, -0.5);
        let (a, eps) = (1.2, 0.2);
        let q = ring_intersection_area(&x, &y, a, eps);
        let (mc, se) = ring_intersection_mc(&x, &y, a, eps, 400_000, Seed::new(1));
        assert!((q - mc).abs() < 3.5 * se, "{q} vs {mc} +- {se}");
        assert!((q - ring_intersection_area(&y, &x, a, eps)).abs() < 1e-8);
    }

    #[test]
    fn thin_ring_slope() {
        let rep = thin_ring_report(2.0, 1.0);
        assert!(rep.verdict, "{rep}");
    }

    #[test]
    fn membership_examples() {
        let y = HPoint::from_polar(5.0, 0.7);
        assert!(!a_eps_membership(&y, &y, 1e-3));
        // same ray: members must hug the sphere
        let eps = 1e-3;
        for k in 0..200 {
            let rr = 5.0 + 2.0 * eps * k as f64 / 200.0;
            if a_eps_membership(&HPoint::from_polar(rr, 0.7), &y, eps) {
                assert!(rr - 5.0 <= 1e-4, "{rr}");
            }
        }
        // opposite side, just outside the sphere: bisector passes near O
        assert!(a_eps_membership(&HPoint::from_polar(5.0 + 1e-4, 0.7 + PI), &y, eps));
        assert!(!a_eps_membership(&HPoint::from_polar(4.9, 0.7 + PI), &y, eps));
    }

    #[test]
    fn inclusion_and_negative_control() {
        let rep = inclusion_check(5.0, 0.01, 0.1, 20_000, Seed::new(2));
        assert!(rep.verdict && rep.members > 1000, "{rep}");
        let neg = negative_control(5.0, 0.01, 20_000, Seed::new(2));
        assert!(neg.violations > 0, "{neg}");
        assert!(inclusion_band(0.01, 0.1, PI) >= inclusion_band(0.01, 0.1, 2.0));
        assert!((inclusion_band(0.01, 0.1, PI) - 0.022).abs() < 1e-15);
    }

    #[test]
    fn segment_tube_area() {
        let a = HPoint::from_polar(0.4, 0.1);
        let b = HPoint::from_polar(1.3, 2.0);
        let l = dist(&a, &b);
        let eps = 1e-3;
        let e = thickened_area(&[(a, b)], eps, 200_000, Seed::new(3));
        // strip plus two half-disk caps
        let exact = 2.0 * l * eps.sinh() + TAU * (eps.cosh() - 1.0);
        assert!((e.value - exact).abs() < 3.0 * e.stderr + 1e-12, "{e:?} vs {exact}");
        assert!((e.value / (2.0 * eps) / l - 1.0).abs() < 0.02);
    }

    #[test]
    fn thickening_refines_towards_perimeter() {
        let cell = crate::voronoi::typical_cell(1.0, Seed::new(4)).unwrap();
        let p = cell.perimeter();
        let mut prev = f64::INFINITY;
        for eps in [0.04, 0.02, 0.01] {
            let e = thickening_perimeter(&cell, eps, 2_000_000, Seed::new(5));
            let err = (e.value - p).abs();
            assert!(err <= 3.0 * e.stderr + 5.0 * eps * cell.len() as f64);
            assert!(err < prev, "eps {eps}: {err} vs {prev}");
            prev = err;
        }
    }
}
