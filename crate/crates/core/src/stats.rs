use serde::{Deserialize, Serialize};

use crate::sampler::Seed;

/// A Monte-Carlo sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
    /// Replicas dropped (e.g. window-cap exclusions), not counted in `n`.
    pub excluded: usize,
    pub seed: Seed,
}

impl MCEstimate {
    pub fn from_samples(xs: &[f64], excluded: usize, seed: Seed) -> Self {
        let (mean, var) = mean_var(xs);
        let n = xs.len();
        MCEstimate {
            mean,
            stderr: if n > 1 { (var / n as f64).sqrt() } else { 0.0 },
            n,
            excluded,
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }

    /// Deviation from `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.stderr
    }

    /// At most 1% of replicas excluded.
    pub fn is_valid(&self) -> bool {
        self.n >= 1 && (self.excluded as f64) < 0.01 * (self.n + self.excluded) as f64
    }
}

/// Sample mean and unbiased variance, accumulated in slice order.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let mut acc = Welford::default();
    for &x in xs {
        acc.push(x);
    }
    (acc.mean(), acc.variance())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        }
    }
}

/// Sample variance together with its standard error, from the fourth
/// central moment: `se(s^2) ~ sqrt((m4 - s^4) / n)`.
pub fn variance_with_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let (mean, var) = mean_var(xs);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let se = ((m4 - var * var).max(0.0) / n).sqrt();
    (var, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let e = MCEstimate::from_samples(&xs, 0, Seed::new(0));
        assert_eq!(e.mean, 2.5);
        let var = 5.0 / 3.0;
        assert!((e.stderr - (var / 4.0f64).sqrt()).abs() < 1e-15);
        assert!(e.covers(2.5, 0.0));
        assert!(e.is_valid());
    }

    #[test]
    fn exclusions_invalidate() {
        let xs = vec![1.0; 99];
        assert!(!MCEstimate::from_samples(&xs, 1, Seed::new(0)).is_valid());
        let xs = vec![1.0; 1000];
        assert!(MCEstimate::from_samples(&xs, 1, Seed::new(0)).is_valid());
    }

    #[test]
    fn variance_of_two_point_law() {
        let xs: Vec<f64> = (0..1000).map(|i| (i % 2) as f64).collect();
        let (v, se) = variance_with_stderr(&xs);
        assert!((v - 0.25025).abs() < 1e-4);
        assert!(se < 1e-3);
    }
}
