//! Fixtures shared by the benchmarks.

use swarmcov::harness::{bundled, load_scenario};
use swarmcov::orca::{orca_halfplane, velocity_obstacle, AvoidanceConstraint};
use swarmcov::{ConvexPolygon, Vec2, WorldState};

pub fn pentagon() -> ConvexPolygon {
    load_scenario(bundled::EXAMPLE1).unwrap().arena().unwrap()
}

/// `n` well spread points inside the pentagon (golden-ratio sequence).
pub fn generators(n: usize) -> Vec<Vec2> {
    let arena = pentagon();
    let (lo, hi) = arena.bounds().unwrap();
    let phi = 0.618_033_988_749_895_f64;
    let mut out = Vec::with_capacity(n);
    let mut k = 1.0;
    while out.len() < n {
        let u = (k * phi).fract();
        let v = (k * phi * phi).fract();
        let p = Vec2::new(lo.x + u * (hi.x - lo.x), lo.y + v * (hi.y - lo.y));
        if arena.contains(p) {
            out.push(p);
        }
        k += 1.0;
    }
    out
}

/// Constraints an agent at the origin sees from `n` neighbours on a ring.
pub fn ring_constraints(n: usize) -> Vec<AvoidanceConstraint> {
    (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            let xb = Vec2::new(a.cos(), a.sin()) * 0.6;
            let cone = velocity_obstacle(Vec2::ZERO, xb, 0.2, 0.2, 0.1).unwrap();
            orca_halfplane(&cone, Vec2::new(1.0, 0.5), -xb)
        })
        .collect()
}

pub fn example_two_world() -> WorldState {
    load_scenario(bundled::EXAMPLE2).unwrap().build_world().unwrap()
}
