use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ScenarioError;
use crate::geom::{ConvexPolygon, Vec2};

/// Rejection budget per sampling call.
pub const MAX_ATTEMPTS: usize = 100_000;

/// `n` points drawn uniformly from `region`, each at least `2 * radius` from
/// every other point and from the arena boundary.
pub fn sample_initial_positions(
    region: &ConvexPolygon,
    arena: &ConvexPolygon,
    n: usize,
    radius: f64,
    seed: u64,
) -> Result<Vec<Vec2>, ScenarioError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_positions_avoiding(&mut rng, region, arena, n, radius, &[])
}

/// Like [`sample_initial_positions`] but drawing from a caller-owned stream
/// and also keeping clear of the already placed agents in `occupied`.
pub fn sample_positions_avoiding<R: Rng>(
    rng: &mut R,
    region: &ConvexPolygon,
    arena: &ConvexPolygon,
    n: usize,
    radius: f64,
    occupied: &[Vec2],
) -> Result<Vec<Vec2>, ScenarioError> {
    let clearance = 2.0 * radius;
    let Some((lo, hi)) = region.bounds() else {
        return Err(ScenarioError::Invalid("sampling region is empty".into()));
    };
    let mut placed: Vec<Vec2> = Vec::with_capacity(n);
    let mut attempts = 0;
    while placed.len() < n {
        if attempts == MAX_ATTEMPTS {
            return Err(ScenarioError::PackingInfeasible { requested: n, placed: placed.len(), clearance, attempts });
        }
        attempts += 1;
        let p = Vec2::new(rng.random_range(lo.x..=hi.x), rng.random_range(lo.y..=hi.y));
        if !region.contains(p) {
            continue;
        }
        match arena.distance_to_boundary(p) {
            Ok(d) if d >= clearance => {}
            _ => continue,
        }
        if occupied.iter().chain(&placed).any(|q| q.distance(p) < clearance) {
            continue;
        }
        placed.push(p);
    }
    Ok(placed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> ConvexPolygon {
        ConvexPolygon::new(
            [(1.0, 0.0), (6.0, 0.0), (8.0, 5.0), (5.0, 8.0), (0.0, 4.0)]
                .iter()
                .map(|&(x, y)| Vec2::new(x, y))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_point_has_boundary_clearance() {
        let arena = pentagon();
        let region = ConvexPolygon::rectangle(1.5, 0.5, 3.0, 2.0).unwrap();
        let p = sample_initial_positions(&region, &arena, 1, 0.2, 3).unwrap();
        assert_eq!(p.len(), 1);
        assert!(arena.distance_to_boundary(p[0]).unwrap() >= 0.4);
    }

    #[test]
    fn four_points_respect_clearance() {
        let arena = pentagon();
        let region = ConvexPolygon::rectangle(4.5, 5.5, 6.0, 7.0).unwrap();
        for seed in 0..50 {
            let p = sample_initial_positions(&region, &arena, 4, 0.2, seed).unwrap();
            for i in 0..4 {
                assert!(region.contains(p[i]));
                assert!(arena.distance_to_boundary(p[i]).unwrap() >= 0.4);
                for j in i + 1..4 {
                    assert!(p[i].distance(p[j]) >= 0.4);
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let arena = pentagon();
        let region = ConvexPolygon::rectangle(1.5, 0.5, 3.0, 2.0).unwrap();
        let a = sample_initial_positions(&region, &arena, 4, 0.2, 99).unwrap();
        let b = sample_initial_positions(&region, &arena, 4, 0.2, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_initial_positions(&region, &arena, 4, 0.2, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn overfull_region_reports_infeasible() {
        let arena = pentagon();
        let region = ConvexPolygon::rectangle(2.0, 1.0, 2.5, 1.5).unwrap();
        let err = sample_initial_positions(&region, &arena, 10, 0.2, 1).unwrap_err();
        assert!(matches!(err, ScenarioError::PackingInfeasible { requested: 10, .. }));
    }
}
