//! Reference values for the typical cell and the Monte-Carlo harness that checks them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::integrate;
use crate::sampler::{SampleError, Seed};
use crate::stats::MCEstimate;
use crate::voronoi::{typical_cell_with, TypicalCellConfig, VoronoiError};

/// Upper end of the truncated integral.
pub const CUTOFF: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterValue {
    pub value: f64,
    /// Quadrature error estimate plus the bound on the truncated tail.
    pub error_bound: f64,
}

/// Expected typical-cell perimeter at intensity `lambda`:
/// `(8 / sqrt(pi lambda)) * int_0^inf e^-u sqrt(u + u^2 / (4 pi lambda)) du`.
pub fn isokawa_perimeter(lambda: f64) -> f64 {
    isokawa_perimeter_bounded(lambda).value
}

pub fn isokawa_perimeter_bounded(lambda: f64) -> PerimeterValue {
    assert!(lambda > 0.0, "intensity must be positive");
    let k = 1.0 / (4.0 * PI * lambda);
    let pre = 8.0 / (PI * lambda).sqrt();
    let f = |u: f64| (-u).exp() * (u + k * u * u).sqrt();
    // the absolute tolerance applies to the final value
    let q = integrate(f, 0.0, CUTOFF, 1e-10 / pre, 2000);
    // sqrt(u + k u^2) <= sqrt(k) u + sqrt(u) <= (sqrt(k) + 1) u for u >= 1,
    // and int_c^inf u e^-u du = (c + 1) e^-c
    let tail = (k.sqrt() + 1.0) * (CUTOFF + 1.0) * (-CUTOFF).exp();
    PerimeterValue {
        value: pre * q.value,
        error_bound: pre * (q.error + tail),
    }
}

/// Per-intensity summary of a typical-cell experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub lambda: f64,
    pub mean_area: MCEstimate,
    pub mean_perimeter: MCEstimate,
    pub ratio: f64,
    pub reference_perimeter: f64,
}

impl RatioRow {
    /// Boundary length per unit area, each side shared by two cells.
    pub fn density(&self) -> f64 {
        self.lambda * self.mean_perimeter.mean / 2.0
    }

    pub fn reference_density(&self) -> f64 {
        self.lambda * self.reference_perimeter / 2.0
    }

    pub const CSV_HEADER: [&'static str; 9] = [
        "lambda",
        "mean_area",
        "se_area",
        "mean_perimeter",
        "se_perimeter",
        "ratio",
        "reference_perimeter",
        "excluded",
        "seed",
    ];

    pub fn csv_fields(&self) -> [String; 9] {
        [
            fmt(self.lambda),
            fmt(self.mean_area.mean),
            fmt(self.mean_area.stderr),
            fmt(self.mean_perimeter.mean),
            fmt(self.mean_perimeter.stderr),
            fmt(self.ratio),
            fmt(self.reference_perimeter),
            self.mean_area.excluded.to_string(),
            self.mean_area.seed.to_string(),
        ]
    }
}

/// Fixed-width scientific format so artifacts are byte-stable.
pub fn fmt(x: f64) -> String {
    format!("{x:.10e}")
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("need at least {min} replicas, got {got}")]
    TooFewReplicas { min: usize, got: usize },
    #[error("{excluded} of {total} replicas hit the window cap")]
    TooManyExclusions { excluded: usize, total: usize },
    #[error(transparent)]
    Voronoi(#[from] VoronoiError),
}

pub const MIN_REPLICAS: usize = 100;

/// Area and perimeter of `replicas` typical cells at intensity `lambda`.
///
/// Replica `i` uses `seed.with_stream(i)`, so the result does not depend on
/// the number of worker threads.
pub fn typical_cell_experiment(
    lambda: f64,
    replicas: usize,
    seed: Seed,
) -> Result<RatioRow, ExperimentError> {
    typical_cell_experiment_with(lambda, replicas, seed, &TypicalCellConfig::default())
}

pub fn typical_cell_experiment_with(
    lambda: f64,
    replicas: usize,
    seed: Seed,
    config: &TypicalCellConfig,
) -> Result<RatioRow, ExperimentError> {
    if replicas < MIN_REPLICAS {
        return Err(ExperimentError::TooFewReplicas {
            min: MIN_REPLICAS,
            got: replicas,
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(VoronoiError::Sample(SampleError::BadIntensity(lambda)).into());
    }
    let results: Vec<Result<(f64, f64), VoronoiError>> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let t = typical_cell_with(lambda, seed.with_stream(i), config)?;
            Ok((t.cell.area()?, t.cell.perimeter()))
        })
        .collect();
    let mut areas = Vec::with_capacity(replicas);
    let mut perims = Vec::with_capacity(replicas);
    let mut excluded = 0;
    for r in results {
        match r {
            Ok((a, p)) => {
                areas.push(a);
                perims.push(p);
            }
            Err(VoronoiError::WindowCap { .. }) => excluded += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if areas.is_empty() {
        return Err(ExperimentError::TooManyExclusions {
            excluded,
            total: replicas,
        });
    }
    let mean_area = MCEstimate::from_samples(&areas, excluded, seed);
    let mean_perimeter = MCEstimate::from_samples(&perims, excluded, seed);
    Ok(RatioRow {
        lambda,
        ratio: mean_perimeter.mean / mean_area.mean,
        mean_area,
        mean_perimeter,
        reference_perimeter: isokawa_perimeter(lambda),
    })
}

/// One row per intensity, each with its own child seed.
pub fn density_experiment(
    lambdas: &[f64],
    replicas: usize,
    seed: Seed,
) -> Result<Vec<RatioRow>, ExperimentError> {
    lambdas
        .iter()
        .enumerate()
        .map(|(k, &l)| typical_cell_experiment(l, replicas, seed.child(k as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: composite Simpson on a fine uniform grid.
    fn simpson_perimeter(lambda: f64) -> f64 {
        let k = 1.0 / (4.0 * PI * lambda);
        // v = sqrt(u) removes the endpoint singularity: du = 2 v dv
        let g = |v: f64| {
            let u = v * v;
            (-u).exp() * (u + k * u * u).sqrt() * 2.0 * v
        };
        let (a, b, n) = (0.0, 60f64.sqrt(), 200_000);
        let h = (b - a) / n as f64;
        let mut s = g(a) + g(b);
        for i in 1..n {
            s += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        8.0 / (PI * lambda).sqrt() * s * h / 3.0
    }

    #[test]
    fn matches_simpson_oracle() {
        for lambda in [1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0] {
            let q = isokawa_perimeter(lambda);
            let s = simpson_perimeter(lambda);
            assert!(((q - s) / s).abs() < 1e-9, "lambda {lambda}: {q} vs {s}");
        }
    }

    #[test]
    fn error_bound_is_small() {
        let v = isokawa_perimeter_bounded(1.0);
        assert!(v.error_bound < 1e-9);
        assert!((v.value - 4.228_225_22).abs() < 1e-7);
    }

    #[test]
    fn small_intensity_limit() {
        let l = 1e-4;
        let r = l * isokawa_perimeter(l) / (4.0 / PI);
        assert!((r - 1.0).abs() < 0.01, "{r}");
    }

    #[test]
    fn large_intensity_limit() {
        let l: f64 = 1e4;
        let r = l.sqrt() * isokawa_perimeter(l) / 4.0;
        assert!((r - 1.0).abs() < 0.01, "{r}");
    }

    #[test]
    fn strictly_decreasing() {
        let grid: Vec<f64> = (0..20).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 19.0)).collect();
        let vals: Vec<f64> = grid.iter().map(|&l| isokawa_perimeter(l)).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        // the density lambda * P / 2 decreases as lambda does
        let dens: Vec<f64> = grid.iter().zip(&vals).map(|(l, p)| l * p / 2.0).collect();
        assert!(dens.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn experiment_rejects_few_replicas() {
        assert!(matches!(
            typical_cell_experiment(1.0, 10, Seed::new(0)),
            Err(ExperimentError::TooFewReplicas { .. })
        ));
    }

    #[test]
    fn experiment_row_is_consistent() {
        let row = typical_cell_experiment(1.0, 400, Seed::new(4)).unwrap();
        assert_eq!(row.ratio, row.mean_perimeter.mean / row.mean_area.mean);
        assert!(row.mean_area.covers(1.0, 4.0));
        assert!(row.mean_perimeter.covers(row.reference_perimeter, 4.0));
        assert_eq!(row.csv_fields().len(), RatioRow::CSV_HEADER.len());
    }
}
