//! Poisson–Voronoi tessellations of the surface and random cell colorings.
//!
//! Each surface cell is represented by the planar Voronoi cell of its
//! representative among all lifts of all nuclei. That planar cell lies in the
//! Dirichlet domain of the representative, so it maps one-to-one onto the
//! surface cell; its sides facing a lift of another nucleus are boundary
//! sides, while sides facing a lift of its own nucleus are interior to the
//! surface cell and are not counted.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SurfaceError, SurfaceModel};
use crate::hypmath::{ball_radius_for_area, dist, HPoint};
use crate::sampler::{poisson_domain, SampleError, Seed, Window};
use crate::stats::variance_with_stderr;
use crate::voronoi::{TessCell, Tessellation, VoronoiError};

pub const MIN_INTENSITY: f64 = 0.25;
pub const MIN_TRIALS: usize = 100;

/// Side length of `cell` facing other nuclei.
fn boundary_of(cell: &TessCell, own: usize) -> f64 {
    cell.sides()
        .filter(|&(_, _, j)| j != own)
        .map(|(a, b, _)| dist(a, b))
        .sum()
}

/// Voronoi tessellation of the surface from the given representatives.
pub fn tessellate_surface(
    nuclei: &[HPoint],
    intensity: f64,
    surf: &SurfaceModel,
) -> Result<Tessellation, SurfaceError> {
    let window = Window::Domain {
        label: surf.group.label.clone(),
        area: surf.area,
    };
    if nuclei.is_empty() {
        // no nucleus: the whole surface as one cell, centred on the domain
        return Ok(Tessellation {
            nuclei: vec![],
            cells: vec![TessCell::from_convex(&surf.domain)],
            window,
            boundary_length: 0.0,
        });
    }
    let start = 3.0 * ball_radius_for_area(1.0 / intensity);
    let cells: Vec<Result<TessCell, SurfaceError>> = (0..nuclei.len())
        .into_par_iter()
        .map(|i| {
            let cell = surf.lifted_cell(&nuclei[i], nuclei, Some(i), start)?;
            let area = cell.area().map_err(VoronoiError::from)?;
            let mut t = TessCell::from_convex(&cell);
            t.area = area;
            Ok(t)
        })
        .collect();
    let cells = cells.into_iter().collect::<Result<Vec<_>, _>>()?;
    let boundary_length = cells
        .iter()
        .enumerate()
        .map(|(i, c)| boundary_of(c, i))
        .sum::<f64>()
        / 2.0;
    Ok(Tessellation {
        nuclei: nuclei.to_vec(),
        cells,
        window,
        boundary_length,
    })
}

/// Poisson–Voronoi tessellation of the surface at intensity `lambda`.
pub fn surface_voronoi(lambda: f64, surf: &SurfaceModel, seed: Seed) -> Result<Tessellation, SurfaceError> {
    if !(lambda.is_finite()) || lambda <= 0.0 {
        return Err(VoronoiError::Sample(SampleError::BadIntensity(lambda)).into());
    }
    if lambda < MIN_INTENSITY {
        return Err(SurfaceError::IntensityTooSmall(lambda));
    }
    let cloud = poisson_domain(lambda, surf, seed).map_err(VoronoiError::from)?;
    tessellate_surface(&cloud.points, lambda, surf)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringOutcome {
    pub lambda: f64,
    pub black_area: f64,
    /// Length of the sides separating a black cell from a white one.
    pub boundary_length: f64,
    /// `boundary_length / min(black, white area)`; infinite for a one-colour surface.
    pub cheeger_value: f64,
    pub cells: usize,
    pub seed: Seed,
}

impl ColoringOutcome {
    pub const CSV_HEADER: [&'static str; 6] =
        ["lambda", "N", "black_area", "boundary_length", "cheeger_value", "seed"];

    pub fn csv_fields(&self) -> [String; 6] {
        let f = crate::isokawa::fmt;
        [
            f(self.lambda),
            self.cells.to_string(),
            f(self.black_area),
            f(self.boundary_length),
            f(self.cheeger_value),
            self.seed.to_string(),
        ]
    }
}

/// Black area and black/white boundary length for a given coloring.
pub fn color_tessellation(t: &Tessellation, black: &[bool]) -> (f64, f64) {
    let black_area = t
        .cells
        .iter()
        .zip(black)
        .filter(|(_, &b)| b)
        .map(|(c, _)| c.area)
        .sum();
    let mut boundary = 0.0;
    for (i, c) in t.cells.iter().enumerate() {
        for (a, b, j) in c.sides() {
            if j < black.len() && black[i] != black[j] {
                boundary += dist(a, b);
            }
        }
    }
    (black_area, boundary / 2.0)
}

fn random_colors(n: usize, seed: Seed) -> Vec<bool> {
    let mut rng = seed.rng();
    (0..n).map(|_| rng.random::<bool>()).collect()
}

/// Independent trials: fresh tessellation (stream `2i`) and fresh coloring (stream `2i + 1`).
pub fn coloring_experiment(
    lambda: f64,
    surf: &SurfaceModel,
    trials: usize,
    seed: Seed,
) -> Result<Vec<ColoringOutcome>, SurfaceError> {
    if trials < MIN_TRIALS {
        return Err(SurfaceError::TooFewTrials {
            min: MIN_TRIALS,
            got: trials,
        });
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let t = surface_voronoi(lambda, surf, seed.with_stream(2 * i))?;
            let color_seed = seed.with_stream(2 * i + 1);
            let colors = random_colors(t.nuclei.len(), color_seed);
            let (black_area, boundary_length) = color_tessellation(&t, &colors);
            let smaller = black_area.min(surf.area - black_area);
            let cheeger_value = if smaller > 0.0 {
                boundary_length / smaller
            } else {
                f64::INFINITY
            };
            Ok(ColoringOutcome {
                lambda,
                black_area,
                boundary_length,
                cheeger_value,
                cells: t.nuclei.len(),
                seed: seed.with_stream(2 * i),
            })
        })
        .collect()
}

/// Empirical variance of the black area over many colorings of one tessellation,
/// against the prediction `(1/4) sum |C_i|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceCheck {
    pub variance: f64,
    pub stderr: f64,
    pub predicted: f64,
    pub colorings: usize,
}

impl VarianceCheck {
    pub fn within(&self, k: f64) -> bool {
        (self.variance - self.predicted).abs() <= k * self.stderr
    }
}

pub fn variance_identity(t: &Tessellation, colorings: usize, seed: Seed) -> VarianceCheck {
    let n = t.nuclei.len();
    let areas: Vec<f64> = (0..colorings as u64)
        .into_par_iter()
        .map(|k| {
            let colors = random_colors(n, seed.with_stream(k));
            t.cells
                .iter()
                .zip(&colors)
                .filter(|(_, &b)| b)
                .map(|(c, _)| c.area)
                .sum::<f64>()
        })
        .collect();
    let (variance, stderr) = variance_with_stderr(&areas);
    let predicted = t.cells.iter().map(|c| c.area * c.area).sum::<f64>() / 4.0;
    VarianceCheck {
        variance,
        stderr,
        predicted,
        colorings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypmath::Tolerances;
    use crate::stats::MCEstimate;
    use crate::surface::{bolza, quotient_distance, SurfacePoint};
    use std::f64::consts::PI;

    #[test]
    fn single_nucleus_covers_surface() {
        let s = bolza();
        let t = tessellate_surface(&[HPoint::from_polar(0.7, 1.0)], 1.0, &s).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert!((t.cells[0].area - 4.0 * PI).abs() < 1e-6);
        assert_eq!(t.boundary_length, 0.0);
    }

    #[test]
    fn no_nucleus() {
        let s = bolza();
        let t = tessellate_surface(&[], 1.0, &s).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.boundary_length, 0.0);
    }

    #[test]
    fn areas_sum_to_surface_area() {
        let s = bolza();
        for k in 0..100 {
            let t = surface_voronoi(1.0, &s, Seed::new(k)).unwrap();
            let total = t.total_area();
            assert!(((total - 4.0 * PI) / (4.0 * PI)).abs() < 1e-6, "draw {k}: {total}");
        }
    }

    #[test]
    fn cells_are_nearest_nucleus_regions() {
        let s = bolza();
        let t = surface_voronoi(1.0, &s, Seed::new(5)).unwrap();
        let reps: Vec<SurfacePoint> = t.nuclei.iter().map(|&rep| SurfacePoint { rep }).collect();
        let mut rng = Seed::new(6).rng();
        for (i, c) in t.cells.iter().enumerate() {
            let cell = crate::hypmath::ConvexCell {
                nucleus: c.nucleus,
                vertices: c.sides().map(|(a, _, _)| *a).collect(),
                walls: vec![],
                neighbors: vec![],
            };
            cell.check(&Tolerances::DEFAULT).ok();
            for _ in 0..20 {
                // random convex combination of the cell's vertices
                let w: Vec<f64> = cell.vertices.iter().map(|_| rng.random::<f64>()).collect();
                let mut v = [0.0; 3];
                for (p, wi) in cell.vertices.iter().zip(&w) {
                    for k in 0..3 {
                        v[k] += wi * p.vec()[k];
                    }
                }
                let x = HPoint::from_timelike(&v).unwrap();
                let sx = SurfacePoint::reduce(&x, &s);
                let own = dist(&x, &c.nucleus);
                let best = reps
                    .iter()
                    .map(|r| quotient_distance(&sx, r, &s).unwrap())
                    .fold(f64::INFINITY, f64::min);
                assert!((own - best).abs() < 1e-9, "cell {i}");
            }
        }
    }

    #[test]
    fn rejects_small_intensity() {
        assert!(matches!(
            surface_voronoi(0.1, &bolza(), Seed::new(0)),
            Err(SurfaceError::IntensityTooSmall(_))
        ));
    }

    #[test]
    fn coloring_means_and_variance() {
        let s = bolza();
        let out = coloring_experiment(2.0, &s, 200, Seed::new(12)).unwrap();
        let areas: Vec<f64> = out.iter().map(|o| o.black_area).collect();
        let e = MCEstimate::from_samples(&areas, 0, Seed::new(12));
        assert!(e.covers(2.0 * PI, 3.5), "{e:?}");
        assert!(out.iter().all(|o| o.black_area >= 0.0 && o.black_area <= 4.0 * PI + 1e-9));
        let t = surface_voronoi(2.0, &s, Seed::new(13)).unwrap();
        let v = variance_identity(&t, 4000, Seed::new(14));
        assert!(v.within(3.5), "{v:?}");
    }
}
