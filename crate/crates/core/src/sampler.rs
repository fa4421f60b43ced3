//! Seeded Poisson point processes on hyperbolic disks and bounded domains.
//!
//! Randomness comes from ChaCha8 keyed by `(master, stream)`: the master seed
//! selects the key and the stream selects an independent keystream, so
//! replicas indexed by stream never share state and reproduce bit-for-bit
//! regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypmath::{ball_area, HPoint, Tolerances};

/// Largest disk radius the samplers accept.
pub const MAX_RADIUS: f64 = 25.0;
/// Default cap on the expected number of points of a single draw.
pub const DEFAULT_COUNT_CAP: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Seed { stream, ..self }
    }

    /// An independent master seed for a named sub-experiment.
    pub fn child(self, tag: u64) -> Self {
        Seed {
            master: splitmix64(self.master ^ splitmix64(tag ^ self.stream.rotate_left(32))),
            stream: 0,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.master, self.stream)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("intensity must be positive, got {0}")]
    BadIntensity(f64),
    #[error("radius must lie in (0, {MAX_RADIUS}], got {0}")]
    BadRadius(f64),
    #[error("expected point count {expected:.3e} exceeds the cap {cap:.3e}")]
    TooManyPoints { expected: f64, cap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Window {
    /// Disk of the given radius about the origin.
    Disk { radius: f64 },
    /// A named bounded domain (e.g. a surface fundamental polygon).
    Domain { label: String, area: f64 },
}

impl Window {
    pub fn area(&self) -> f64 {
        match self {
            Window::Disk { radius } => ball_area(*radius),
            Window::Domain { area, .. } => *area,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<HPoint>,
    pub intensity: f64,
    pub window: Window,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A bounded region that can be sampled by rejection from a covering disk about the origin.
pub trait SamplingDomain {
    fn contains(&self, p: &HPoint) -> bool;
    fn area(&self) -> f64;
    fn covering_radius(&self) -> f64;
    fn label(&self) -> String;
}

/// Radius with law `P(r <= s) = (cosh s - 1)/(cosh R - 1)` from a uniform `u`.
#[inline]
pub fn radial_quantile(u: f64, radius: f64) -> f64 {
    // cosh r - 1 = 2 sinh^2(r/2)
    2.0 * (u.sqrt() * (radius / 2.0).sinh()).asinh()
}

/// Uniform point in the disk of radius `radius` about the origin.
pub fn uniform_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> HPoint {
    let u: f64 = rng.random();
    let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    HPoint::from_polar(radial_quantile(u, radius), theta)
}

/// Draws a Poisson count with the given mean.
pub fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite mean");
    d.sample(rng) as usize
}

/// Whether two points of the list are closer than the nucleus-separation tolerance.
pub fn has_near_coincidence(points: &[HPoint]) -> bool {
    let tol = Tolerances::DEFAULT.nucleus_separation;
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].x1.total_cmp(&points[b].x1));
    for (k, &i) in idx.iter().enumerate() {
        let p = &points[i];
        let window = tol * p.x0 * 4.0;
        for &j in &idx[k + 1..] {
            let q = &points[j];
            if q.x1 - p.x1 > window {
                break;
            }
            if crate::hypmath::dist(p, q) < tol {
                return true;
            }
        }
    }
    false
}

pub fn poisson_disk(lambda: f64, radius: f64, seed: Seed) -> Result<PointCloud, SampleError> {
    poisson_disk_capped(lambda, radius, seed, DEFAULT_COUNT_CAP)
}

pub fn poisson_disk_capped(
    lambda: f64,
    radius: f64,
    seed: Seed,
    cap: f64,
) -> Result<PointCloud, SampleError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(SampleError::BadIntensity(lambda));
    }
    if !(radius > 0.0 && radius <= MAX_RADIUS) {
        return Err(SampleError::BadRadius(radius));
    }
    let expected = lambda * ball_area(radius);
    if expected > cap {
        return Err(SampleError::TooManyPoints { expected, cap });
    }
    let mut rng = seed.rng();
    loop {
        let n = poisson_count(&mut rng, expected);
        let points: Vec<HPoint> = (0..n).map(|_| uniform_in_disk(&mut rng, radius)).collect();
        if !has_near_coincidence(&points) {
            return Ok(PointCloud {
                points,
                intensity: lambda,
                window: Window::Disk { radius },
            });
        }
    }
}

/// Outcome of rejection sampling from the covering disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionStats {
    pub proposed: u64,
    pub accepted: u64,
}

impl RejectionStats {
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposed as f64
    }
}

/// `n` uniform points of `domain` by rejection from its covering disk.
pub fn uniform_in_domain<D: SamplingDomain + ?Sized, R: Rng + ?Sized>(
    domain: &D,
    n: usize,
    rng: &mut R,
) -> (Vec<HPoint>, RejectionStats) {
    let radius = domain.covering_radius();
    let mut stats = RejectionStats {
        proposed: 0,
        accepted: 0,
    };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = uniform_in_disk(rng, radius);
        stats.proposed += 1;
        if domain.contains(&p) {
            stats.accepted += 1;
            out.push(p);
        }
    }
    (out, stats)
}

/// Poisson process of intensity `lambda` on a bounded domain.
pub fn poisson_domain<D: SamplingDomain + ?Sized>(
    lambda: f64,
    domain: &D,
    seed: Seed,
) -> Result<PointCloud, SampleError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(SampleError::BadIntensity(lambda));
    }
    let mut rng = seed.rng();
    loop {
        let n = poisson_count(&mut rng, lambda * domain.area());
        let (points, _) = uniform_in_domain(domain, n, &mut rng);
        if !has_near_coincidence(&points) {
            return Ok(PointCloud {
                points,
                intensity: lambda,
                window: Window::Domain {
                    label: domain.label(),
                    area: domain.area(),
                },
            });
        }
    }
}
