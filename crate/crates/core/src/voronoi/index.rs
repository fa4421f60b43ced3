use std::f64::consts::TAU;

use crate::hypmath::{cosh_dist, HPoint};

const MAX_BINS: usize = 1 << 20;

struct Ring {
    bins: Vec<Vec<u32>>,
}

/// Points bucketed by radius rings and angular bins of roughly equal size.
pub struct PolarIndex {
    width: f64,
    rings: Vec<Ring>,
    points: Vec<HPoint>,
}

impl PolarIndex {
    /// `scale` is the target bin diameter, typically the mean cell size.
    pub fn new(points: &[HPoint], scale: f64) -> Self {
        let width = scale.clamp(0.05, 4.0);
        let rmax = points.iter().map(|p| p.radius()).fold(0.0, f64::max);
        let n_rings = (rmax / width).floor() as usize + 1;
        let mut rings: Vec<Ring> = (0..n_rings)
            .map(|k| {
                let r_hi = (k + 1) as f64 * width;
                let m = ((TAU * r_hi.sinh() / width).ceil() as usize).clamp(1, MAX_BINS);
                Ring {
                    bins: vec![Vec::new(); m],
                }
            })
            .collect();
        for (i, p) in points.iter().enumerate() {
            let k = ((p.radius() / width).floor() as usize).min(n_rings - 1);
            let ring = &mut rings[k];
            let b = bin_of(p.angle(), ring.bins.len());
            ring.bins[b].push(i as u32);
        }
        PolarIndex {
            width,
            rings,
            points: points.to_vec(),
        }
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    /// Indices and `cosh` distances of all points within distance `d` of `center`.
    pub fn within(&self, center: &HPoint, d: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        let cd = d.cosh();
        let rc = center.radius();
        let theta = center.angle();
        let (ch_c, sh_c) = (rc.cosh(), rc.sinh());
        for (k, ring) in self.rings.iter().enumerate() {
            let r_lo = k as f64 * self.width;
            let r_hi = r_lo + self.width;
            if r_hi < rc - d || r_lo > rc + d {
                continue;
            }
            let m = ring.bins.len();
            let lo = r_lo.max(rc - d);
            let hi = r_hi.min(rc + d);
            let half = if rc <= d || lo <= 0.0 {
                std::f64::consts::PI
            } else {
                let at = |r: f64| -> f64 {
                    let c = (ch_c * r.cosh() - cd) / (sh_c * r.sinh());
                    c.clamp(-1.0, 1.0).acos()
                };
                let mut h = at(lo).max(at(hi));
                // widest angular extent of the ball occurs where cosh r = cosh rc / cosh d
                let rt = (ch_c / cd).max(1.0).acosh();
                if rt > lo && rt < hi {
                    h = h.max(at(rt));
                }
                h + 1e-9
            };
            let bw = TAU / m as f64;
            if 2.0 * half + 2.0 * bw >= TAU {
                for bin in &ring.bins {
                    self.collect(bin, center, cd, &mut out);
                }
            } else {
                let first = ((theta - half) / bw).floor() as i64;
                let last = ((theta + half) / bw).floor() as i64;
                for b in first..=last {
                    let b = b.rem_euclid(m as i64) as usize;
                    self.collect(&ring.bins[b], center, cd, &mut out);
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    fn collect(&self, bin: &[u32], center: &HPoint, cd: f64, out: &mut Vec<(usize, f64)>) {
        for &i in bin {
            let c = cosh_dist(center, &self.points[i as usize]);
            if c <= cd {
                out.push((i as usize, c));
            }
        }
    }
}

fn bin_of(angle: f64, m: usize) -> usize {
    let t = angle.rem_euclid(TAU) / TAU;
    ((t * m as f64) as usize).min(m - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{poisson_disk, Seed};

    #[test]
    fn matches_brute_force() {
        let cloud = poisson_disk(2.0, 6.0, Seed::new(11)).unwrap();
        let index = PolarIndex::new(&cloud.points, 0.8);
        for (k, c) in cloud.points.iter().enumerate().step_by(97) {
            for d in [0.3, 1.5, 4.0, 9.0] {
                let got: Vec<usize> = {
                    let mut v: Vec<usize> = index.within(c, d).into_iter().map(|x| x.0).collect();
                    v.sort();
                    v
                };
                let want: Vec<usize> = cloud
                    .points
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| cosh_dist(c, q) <= d.cosh())
                    .map(|(i, _)| i)
                    .collect();
                assert_eq!(got, want, "point {k}, radius {d}");
            }
        }
    }
}
