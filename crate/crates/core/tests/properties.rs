use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmcov::engine::{agent_velocity, step};
use swarmcov::harness::{bundled, load_scenario, run_scenario, sample_initial_positions};
use swarmcov::orca::{lp, velocity_obstacle};
use swarmcov::voronoi::voronoi_cells;
use swarmcov::{ConvexPolygon, HalfPlane, Vec2};

fn pentagon() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Vec2::new(1.0, 0.0),
        Vec2::new(6.0, 0.0),
        Vec2::new(8.0, 5.0),
        Vec2::new(5.0, 8.0),
        Vec2::new(0.0, 4.0),
    ])
    .unwrap()
}

fn point_in(range: std::ops::Range<f64>) -> impl Strategy<Value = Vec2> {
    (range.clone(), range).prop_map(|(x, y)| Vec2::new(x, y))
}

fn direction() -> impl Strategy<Value = Vec2> {
    (0.0..std::f64::consts::TAU).prop_map(|a: f64| Vec2::new(a.cos(), a.sin()))
}

fn halfplane(range: std::ops::Range<f64>) -> impl Strategy<Value = HalfPlane> {
    (point_in(range), direction()).prop_map(|(p, n)| HalfPlane::new(p, n).unwrap())
}

/// Generators inside the pentagon, pairwise apart.
fn generators(max: usize) -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec(point_in(0.0..8.0), 1..=max).prop_map(|ps| {
        let arena = pentagon();
        let mut out: Vec<Vec2> = Vec::new();
        for p in ps {
            if arena.contains(p) && out.iter().all(|q| q.distance(p) > 1e-6) {
                out.push(p);
            }
        }
        if out.is_empty() {
            out.push(Vec2::new(4.0, 3.0));
        }
        out
    })
}

proptest! {
    #[test]
    fn clipping_shrinks_and_is_idempotent(h in halfplane(-1.0..9.0)) {
        let q = pentagon();
        let once = q.clip(&h);
        prop_assert!(once.area() <= q.area() + 1e-12);
        let twice = once.clip(&h);
        prop_assert!((twice.area() - once.area()).abs() <= 1e-9);
        for v in once.vertices() {
            prop_assert!(h.signed_distance(*v) >= -1e-9);
            prop_assert!(q.contains(*v));
        }
    }

    #[test]
    fn complementary_clips_partition_the_area(p in point_in(1.0..6.0), n in direction()) {
        let q = pentagon();
        let a = q.clip(&HalfPlane::new(p, n).unwrap());
        let b = q.clip(&HalfPlane::new(p, -n).unwrap());
        prop_assert!((a.area() + b.area() - q.area()).abs() <= 1e-9 * q.area());
    }

    #[test]
    fn centroid_lies_inside(h in halfplane(1.0..6.0)) {
        let cell = pentagon().clip(&h);
        prop_assume!(cell.area() > 1e-6);
        prop_assert!(cell.contains(cell.centroid().unwrap()));
    }

    #[test]
    fn parallel_axis_identity(h in halfplane(1.0..6.0), p in point_in(-2.0..10.0)) {
        let cell = pentagon().clip(&h);
        prop_assume!(cell.area() > 1e-6);
        let c = cell.centroid().unwrap();
        let lhs = cell.quadratic_moment(p);
        let rhs = cell.quadratic_moment(c) + cell.area() * (p - c).norm_sq();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn voronoi_is_permutation_equivariant(gs in generators(9), seed in any::<u64>()) {
        let arena = pentagon();
        let mut order: Vec<usize> = (0..gs.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let permuted: Vec<Vec2> = order.iter().map(|&i| gs[i]).collect();
        let a = voronoi_cells(&gs, &arena).unwrap();
        let b = voronoi_cells(&permuted, &arena).unwrap();
        for (k, &i) in order.iter().enumerate() {
            prop_assert!((a.cells[i].area() - b.cells[k].area()).abs() <= 1e-9);
            if a.cells[i].area() > 1e-9 {
                let d = a.cells[i].centroid().unwrap().distance(b.cells[k].centroid().unwrap());
                prop_assert!(d <= 1e-9);
            }
        }
    }

    #[test]
    fn cone_matches_sampled_trajectories(
        rel in point_in(-3.0..3.0),
        v in point_in(-40.0..40.0),
        tau in 0.05..1.0f64,
    ) {
        let r = 0.4;
        prop_assume!(rel.norm() > r + 1e-6);
        let cone = velocity_obstacle(Vec2::ZERO, rel, 0.2, 0.2, tau).unwrap();
        // Exact minimum over t in (0, tau] of |t v - rel|.
        let t = if v.norm_sq() > 0.0 { (v.dot(rel) / v.norm_sq()).clamp(0.0, tau) } else { 0.0 };
        let closest = (v * t - rel).norm();
        prop_assume!((closest - r).abs() > 1e-9);
        prop_assert_eq!(cone.contains(v), closest < r);
    }

    #[test]
    fn cone_is_antisymmetric(xa in point_in(-3.0..3.0), xb in point_in(-3.0..3.0), v in point_in(-20.0..20.0)) {
        prop_assume!(xa.distance(xb) > 0.41);
        let ab = velocity_obstacle(xa, xb, 0.15, 0.25, 0.3).unwrap();
        let ba = velocity_obstacle(xb, xa, 0.25, 0.15, 0.3).unwrap();
        prop_assert_eq!(ab.contains(v), ba.contains(-v));
    }

    #[test]
    fn program_ignores_constraint_order(
        hs in prop::collection::vec(halfplane(-2.0..2.0), 1..8),
        pref in point_in(-3.0..3.0),
        seed in any::<u64>(),
    ) {
        let mut shuffled = hs.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let a = lp::solve(&[], &hs, 2.0, pref);
        let b = lp::solve(&[], &shuffled, 2.0, pref);
        prop_assert_eq!(a.feasible, b.feasible);
        if a.feasible {
            prop_assert!(a.velocity.distance(b.velocity) <= 1e-7);
        }
    }

    #[test]
    fn feasible_answers_satisfy_every_constraint(
        hs in prop::collection::vec(halfplane(-2.0..2.0), 0..8),
        pref in point_in(-3.0..3.0),
    ) {
        let s = lp::solve(&[], &hs, 2.0, pref);
        prop_assert!(s.velocity.norm() <= 2.0 + 1e-9);
        if s.feasible {
            for h in &hs {
                prop_assert!(h.signed_distance(s.velocity) >= -1e-9);
            }
        }
    }
}

#[test]
fn moment_matches_monte_carlo_estimate() {
    let q = pentagon();
    let p = Vec2::new(2.5, 3.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (lo, hi) = q.bounds().unwrap();
    let box_area = (hi.x - lo.x) * (hi.y - lo.y);
    let n = 400_000;
    let mut sum = 0.0;
    for _ in 0..n {
        let s = Vec2::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        if q.contains(s) {
            sum += (s - p).norm_sq();
        }
    }
    let estimate = sum * box_area / n as f64;
    let exact = q.quadratic_moment(p);
    assert!((estimate - exact).abs() <= 0.01 * exact, "{estimate} vs {exact}");
}

#[test]
fn velocities_do_not_depend_on_evaluation_order() {
    let s = load_scenario(bundled::EXAMPLE2).unwrap();
    let mut world = s.build_world().unwrap();
    for _ in 0..30 {
        world = step(&world).unwrap().0;
    }
    let (_, report) = step(&world).unwrap();
    let mut index: Vec<(usize, usize, usize)> = Vec::new();
    let mut k = 0;
    for (sw, agents) in world.swarms.iter().enumerate() {
        for i in 0..agents.len() {
            index.push((sw, i, k));
            k += 1;
        }
    }
    for &(sw, i, k) in index.iter().rev() {
        assert_eq!(agent_velocity(&world, sw, i).unwrap().velocity, report.new_velocities[k]);
    }
}

#[test]
fn runs_are_bit_identical() {
    for doc in [bundled::EXAMPLE2, bundled::MONTECARLO] {
        let mut s = load_scenario(doc).unwrap();
        s.sim.max_iters = 200;
        assert_eq!(run_scenario(&s).unwrap(), run_scenario(&s).unwrap());
    }
}

#[test]
fn agents_stay_inside_the_arena() {
    for doc in [bundled::EXAMPLE1, bundled::EXAMPLE2, bundled::MONTECARLO] {
        let s = load_scenario(doc).unwrap();
        let arena = s.arena().unwrap();
        let log = run_scenario(&s).unwrap();
        for r in &log.records {
            assert!(r.positions.iter().all(|p| arena.contains(*p)));
        }
    }
}

#[test]
fn ten_thousand_samples_keep_clearance() {
    let arena = pentagon();
    let region = ConvexPolygon::rectangle(1.5, 0.5, 3.0, 2.0).unwrap();
    let mut total = 0;
    for seed in 0..2500 {
        let ps = sample_initial_positions(&region, &arena, 4, 0.2, seed).unwrap();
        for (i, p) in ps.iter().enumerate() {
            assert!(region.contains(*p));
            assert!(arena.distance_to_boundary(*p).unwrap() >= 0.4);
            assert!(ps[i + 1..].iter().all(|q| q.distance(*p) >= 0.4));
        }
        total += ps.len();
    }
    assert_eq!(total, 10_000);
}
