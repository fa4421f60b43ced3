use pvlab::hypmath::ball_area;
use pvlab::isokawa::isokawa_perimeter;
use pvlab::sampler::{poisson_disk, Seed};
use pvlab::voronoi::boundary_length_near_center;

// Boundary length per unit area away from the window edge: each side is shared
// by two cells, so the density is (lambda / 2) times the mean cell perimeter.
#[test]
fn interior_boundary_density_matches_quadrature() {
    let (lambda, radius) = (1.0, 10.0);
    let inner = radius - 3.0;
    let clouds = 30;
    let mut total = 0.0;
    for k in 0..clouds {
        let cloud = poisson_disk(lambda, radius, Seed::new(500 + k)).unwrap();
        let len = boundary_length_near_center(&cloud, inner, 2.0)
            .or_else(|| boundary_length_near_center(&cloud, inner, 3.0))
            .expect("certified boundary length");
        total += len / ball_area(inner);
    }
    let density = total / clouds as f64;
    let expected = lambda / 2.0 * isokawa_perimeter(lambda);
    assert!((density / expected - 1.0).abs() < 0.05, "{density} vs {expected}");
}
