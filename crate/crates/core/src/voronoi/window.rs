//! Voronoi cells clipped to a disk window about the origin.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::{boundary_area, PolarIndex, Piece, TessCell, Tessellation};
use crate::hypmath::{
    ball_radius_for_area, bisector, cosh_dist, wrap_angle, ClipPolygon, HPoint, HalfSpace, FRAME,
};
use crate::sampler::{PointCloud, Window};

struct Crossing {
    point: HPoint,
    on_rim: bool,
}

/// Boundary of `poly ∩ disk(radius)` as sides and counterclockwise rim arcs.
///
/// Frame edges of an unbounded polygon lie outside the unit Klein disk and
/// contribute nothing; a polygon containing the whole disk yields one full
/// rim arc.
pub fn clip_to_disk(poly: &ClipPolygon, radius: f64) -> Vec<Piece> {
    let n = poly.verts.len();
    let ch = radius.cosh();
    let inside: Vec<bool> = poly
        .verts
        .iter()
        .map(|v| v.timelike && v.v[0] < ch)
        .collect();
    let mut sides: Vec<(Crossing, Crossing, usize, HalfSpace)> = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let edge = poly.edges[i];
        if edge.label == FRAME {
            continue;
        }
        let (a, b) = (&poly.verts[i], &poly.verts[j]);
        let wall = HalfSpace { u: edge.u };
        if inside[i] && inside[j] {
            sides.push((
                Crossing { point: a.point().unwrap(), on_rim: false },
                Crossing { point: b.point().unwrap(), on_rim: false },
                edge.label,
                wall,
            ));
            continue;
        }
        let u = edge.u;
        let amp = u[1].hypot(u[2]);
        if amp == 0.0 {
            continue;
        }
        let mut c = u[0] * ch / (amp * radius.sinh());
        if inside[i] || inside[j] {
            c = c.clamp(-1.0, 1.0);
        } else if c.abs() >= 1.0 {
            continue;
        }
        let psi = u[2].atan2(u[1]);
        let alpha = c.acos();
        let ka = (a.v[1] / a.v[0], a.v[2] / a.v[0]);
        let kb = (b.v[1] / b.v[0], b.v[2] / b.v[0]);
        let (dx, dy) = (kb.0 - ka.0, kb.1 - ka.1);
        let len2 = dx * dx + dy * dy;
        let th = radius.tanh();
        let param = |phi: f64| ((th * phi.cos() - ka.0) * dx + (th * phi.sin() - ka.1) * dy) / len2;
        let (p1, p2) = (psi - alpha, psi + alpha);
        let (t1, t2) = (param(p1), param(p2));
        let ((t_lo, phi_lo), (t_hi, phi_hi)) = if t1 <= t2 { ((t1, p1), (t2, p2)) } else { ((t2, p2), (t1, p1)) };
        let rim = |phi: f64| Crossing {
            point: HPoint::from_polar(radius, wrap_angle(phi)),
            on_rim: true,
        };
        let start = if inside[i] {
            Crossing { point: a.point().unwrap(), on_rim: false }
        } else if t_lo > 0.0 && t_lo < 1.0 {
            rim(phi_lo)
        } else {
            continue;
        };
        let end = if inside[j] {
            Crossing { point: b.point().unwrap(), on_rim: false }
        } else if t_hi > 0.0 && t_hi < 1.0 {
            rim(phi_hi)
        } else {
            continue;
        };
        sides.push((start, end, edge.label, wall));
    }
    if sides.is_empty() {
        return vec![Piece::Rim { start: 0.0, sweep: TAU }];
    }
    let m = sides.len();
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        let (from, to, neighbor, wall) = &sides[k];
        out.push(Piece::Side {
            from: from.point,
            to: to.point,
            neighbor: *neighbor,
            wall: *wall,
        });
        if to.on_rim {
            let next = &sides[(k + 1) % m].0;
            let start = to.point.angle();
            let mut sweep = (next.point.angle() - start).rem_euclid(TAU);
            if sweep > TAU - 1e-9 {
                sweep = 0.0;
            }
            out.push(Piece::Rim { start, sweep });
        }
    }
    out
}

/// Largest distance from `center` to the region bounded by `pieces` on a rim of radius `radius`.
fn reach(center: &HPoint, pieces: &[Piece], radius: f64) -> f64 {
    let mut cmax: f64 = 1.0;
    let opposite = wrap_angle(center.angle() + PI);
    for p in pieces {
        match p {
            Piece::Side { from, to, .. } => {
                cmax = cmax.max(cosh_dist(center, from)).max(cosh_dist(center, to));
            }
            Piece::Rim { start, sweep } => {
                let end = HPoint::from_polar(radius, start + sweep);
                let begin = HPoint::from_polar(radius, *start);
                cmax = cmax.max(cosh_dist(center, &begin)).max(cosh_dist(center, &end));
                if (opposite - start).rem_euclid(TAU) <= *sweep {
                    cmax = cmax.max(cosh_dist(center, &HPoint::from_polar(radius, opposite)));
                }
            }
        }
    }
    cmax.acosh()
}

/// Cell of `points[i]` within the disk of radius `radius`.
pub fn window_cell(i: usize, index: &PolarIndex, radius: f64, start: f64) -> TessCell {
    let points = index.points();
    let nucleus = points[i];
    let limit = nucleus.radius() + radius;
    let mut poly = ClipPolygon::frame();
    let mut done: f64 = 0.0;
    let mut d = start;
    loop {
        for (j, c) in index.within(&nucleus, d) {
            if j == i || c <= done.cosh() && done > 0.0 {
                continue;
            }
            // ties go to the smaller index; coincident sites are rejected at sampling
            if let Ok(h) = bisector(&nucleus, &points[j]) {
                poly.clip(&h, j);
            }
        }
        let pieces = clip_to_disk(&poly, radius);
        let rho = reach(&nucleus, &pieces, radius);
        if 2.0 * rho <= d || d >= 2.0 * limit {
            let area = boundary_area(&pieces, radius);
            return TessCell {
                nucleus,
                boundary: pieces,
                area,
            };
        }
        done = d;
        // an early unbounded cell reaches the rim; grow geometrically instead of jumping there
        d = (2.0 * rho * 1.0001).clamp(1.5 * d, 2.0 * d).min(2.0 * limit);
    }
}

/// Interior side length inside the disk of radius `inner`, built from the
/// cells of nuclei within `inner + margin` only.
///
/// Returns `None` when some side inside the disk faces a skipped cell; when
/// every such side faces a computed cell, no skipped cell reaches the disk
/// and the value equals [`Tessellation::boundary_length_within`].
pub fn boundary_length_near_center(cloud: &PointCloud, inner: f64, margin: f64) -> Option<f64> {
    let Window::Disk { radius } = cloud.window else {
        panic!("boundary_length_near_center needs a disk window");
    };
    let scale = ball_radius_for_area(1.0 / cloud.intensity);
    let index = PolarIndex::new(&cloud.points, scale);
    let reach = inner + margin;
    let chosen: Vec<usize> = (0..cloud.points.len())
        .filter(|&i| cloud.points[i].radius() <= reach)
        .collect();
    let mut computed = vec![false; cloud.points.len()];
    for &i in &chosen {
        computed[i] = true;
    }
    let parts: Vec<Option<f64>> = chosen
        .par_iter()
        .map(|&i| {
            let cell = window_cell(i, &index, radius, 3.0 * scale);
            let mut total = 0.0;
            for (a, b, j) in cell.sides() {
                let l = super::segment_length_in_disk(a, b, inner);
                if l > 0.0 && !computed[j] {
                    return None;
                }
                total += l;
            }
            Some(total)
        })
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Some(total / 2.0)
}

/// Voronoi tessellation of a disk-window cloud, cells clipped to the disk.
///
/// # Panics
/// If the cloud's window is not a disk.
pub fn tessellate_window(cloud: &PointCloud) -> Tessellation {
    let Window::Disk { radius } = cloud.window else {
        panic!("tessellate_window needs a disk window");
    };
    let scale = ball_radius_for_area(1.0 / cloud.intensity);
    let index = PolarIndex::new(&cloud.points, scale);
    let start = 3.0 * scale;
    let cells: Vec<TessCell> = (0..cloud.points.len())
        .into_par_iter()
        .map(|i| window_cell(i, &index, radius, start))
        .collect();
    let boundary_length = cells.iter().map(|c| c.side_length()).sum::<f64>() / 2.0;
    Tessellation {
        nuclei: cloud.points.clone(),
        cells,
        window: cloud.window.clone(),
        boundary_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_boundary_matches_full() {
        let cloud = poisson_disk(1.0, 6.0, Seed::new(31)).unwrap();
        let full = tessellate_window(&cloud).boundary_length_within(3.0);
        let part = boundary_length_near_center(&cloud, 3.0, 1.5).unwrap();
        assert!((full - part).abs() < 1e-9 * full, "{full} vs {part}");
        // no margin at all leaves sides facing skipped cells
        assert!(boundary_length_near_center(&cloud, 3.0, 0.0).is_none());
    }
    use crate::hypmath::{ball_area, dist};
    use crate::sampler::{poisson_disk, Seed};

    #[test]
    fn single_point_fills_window() {
        let cloud = PointCloud {
            points: vec![HPoint::from_polar(1.0, 0.5)],
            intensity: 1.0,
            window: Window::Disk { radius: 3.0 },
        };
        let t = tessellate_window(&cloud);
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.boundary_length, 0.0);
        assert!((t.total_area() - ball_area(3.0)).abs() < 1e-9);
    }

    #[test]
    fn two_points_split_window() {
        let cloud = PointCloud {
            points: vec![HPoint::from_polar(1.0, 0.0), HPoint::from_polar(1.0, PI)],
            intensity: 1.0,
            window: Window::Disk { radius: 2.0 },
        };
        let t = tessellate_window(&cloud);
        assert!((t.cells[0].area - ball_area(2.0) / 2.0).abs() < 1e-9);
        assert!((t.boundary_length - 4.0).abs() < 1e-9);
    }

    #[test]
    fn areas_partition_window() {
        for s in 0..10 {
            let cloud = poisson_disk(1.0, 5.0, Seed::new(s)).unwrap();
            let t = tessellate_window(&cloud);
            let total = ball_area(5.0);
            assert!(((t.total_area() - total) / total).abs() < 1e-6, "seed {s}");
            assert!(t.cells.iter().all(|c| c.area > 0.0));
        }
    }

    #[test]
    fn nearest_point_membership() {
        let cloud = poisson_disk(1.0, 4.0, Seed::new(9)).unwrap();
        let t = tessellate_window(&cloud);
        let mut rng = Seed::new(10).rng();
        for _ in 0..1000 {
            let x = crate::sampler::uniform_in_disk(&mut rng, 4.0);
            let k = t.locate(&x).expect("covered");
            let best = t
                .nuclei
                .iter()
                .map(|n| dist(&x, n))
                .fold(f64::INFINITY, f64::min);
            assert!((dist(&x, &t.nuclei[k]) - best).abs() < 1e-9);
        }
    }
}
