//! Reciprocal collision avoidance in velocity space.
//!
//! For a pair of disc agents A and B the velocity obstacle is the set of
//! relative velocities `v` for which `t v` lands inside the open disc
//! `D(x_B − x_A, r_A + r_B)` for some `t ∈ (0, τ]`. Geometrically it is a
//! cone with apex at the origin, truncated by the disc of center
//! `(x_B − x_A)/τ` and radius `(r_A + r_B)/τ`. Each agent takes half of the
//! smallest change `w` that moves the relative velocity onto the cone
//! boundary, which yields one half-plane of permitted velocities per
//! neighbour.

pub mod lp;

use crate::error::OrcaError;
use crate::geom::{HalfPlane, Vec2};

pub use lp::LpSolution;

/// Below this the relative velocity is treated as sitting on the disc
/// center.
const CENTER_EPS: f64 = 1e-12;

/// Pairs closer than the radius sum by at most this much are in contact, not
/// overlapping. Rounding leaves agents that met exactly on either side of
/// the radius sum.
pub const CONTACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedCone {
    pub apex: Vec2,
    pub disc_center: Vec2,
    pub disc_radius: f64,
    /// Unit directions of the cone legs, pointing away from the apex. Zero
    /// when the agents already overlap.
    pub leg_left: Vec2,
    pub leg_right: Vec2,
    overlapping: bool,
}

impl TruncatedCone {
    /// True when the agents already overlap. The obstacle then reduces to the
    /// disc alone, which pushes the agents apart within one horizon.
    pub fn is_overlapping(&self) -> bool {
        self.overlapping
    }

    /// Membership in the open obstacle.
    pub fn contains(&self, v: Vec2) -> bool {
        let c = self.disc_center;
        let r = self.disc_radius;
        if self.overlapping {
            return (v - c).norm_sq() < r * r;
        }
        // Minimise |s v − c|² over s ∈ (0, 1].
        let along = v.dot(c);
        if along <= 0.0 {
            return false;
        }
        let s = (along / v.norm_sq()).min(1.0);
        (v * s - c).norm_sq() < r * r
    }

    /// Unit vector perpendicular to the cone axis, counterclockwise.
    fn axis_perp(&self) -> Vec2 {
        self.disc_center.normalized().unwrap_or(Vec2::new(1.0, 0.0)).perp()
    }
}

/// Obstacle induced on A by B over horizon `tau`.
///
/// Overlapping agents yield the disc-only recovery obstacle over the same
/// horizon. Agents in contact get a cone whose radius sum is clamped to their
/// distance: its legs are perpendicular to the axis and it forbids exactly
/// the approaching relative velocities.
pub fn velocity_obstacle(xa: Vec2, xb: Vec2, ra: f64, rb: f64, tau: f64) -> Result<TruncatedCone, OrcaError> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(OrcaError::NonPositiveHorizon(tau));
    }
    let rel = xb - xa;
    let dist_sq = rel.norm_sq();
    if dist_sq == 0.0 {
        return Err(OrcaError::CoincidentPositions(xa));
    }
    let dist = dist_sq.sqrt();
    let mut combined = ra + rb;
    let disc_center = rel / tau;

    if dist < combined - CONTACT_TOL {
        return Ok(TruncatedCone {
            apex: Vec2::ZERO,
            disc_center,
            disc_radius: combined / tau,
            leg_left: Vec2::ZERO,
            leg_right: Vec2::ZERO,
            overlapping: true,
        });
    }

    combined = combined.min(dist);
    let axis = rel / dist;
    let sin = combined / dist;
    let cos = (dist_sq - combined * combined).max(0.0).sqrt() / dist;
    Ok(TruncatedCone {
        apex: Vec2::ZERO,
        disc_center,
        disc_radius: combined / tau,
        leg_left: axis.rotate(cos, sin),
        leg_right: axis.rotate(cos, -sin),
        overlapping: false,
    })
}

/// `w` from `v_rel` to the nearest point of the obstacle boundary, and the
/// outward unit normal there.
///
/// When `v_rel` sits on the disc center every point of the near arc is
/// equally close; the tangent point on the counterclockwise side of the axis
/// is taken, so two agents meeting head-on veer to opposite sides.
pub fn closest_boundary_adjustment(cone: &TruncatedCone, v_rel: Vec2) -> (Vec2, Vec2) {
    let c = cone.disc_center;
    let r = cone.disc_radius;
    let from_center = v_rel - c;
    let len = from_center.norm();

    if cone.overlapping {
        let n = from_center.normalized().unwrap_or_else(|| cone.axis_perp());
        return (n * (r - len), n);
    }

    if len <= CENTER_EPS * r.max(1.0) {
        let n = cone.leg_left.perp();
        return (c + n * r - v_rel, n);
    }

    let along = from_center.dot(c);
    if along < 0.0 && along * along > r * r * from_center.norm_sq() {
        // Closest to the truncation arc.
        let n = from_center / len;
        return (n * (r - len), n);
    }

    // Closest to a leg. Which one depends on the side of the axis; the test
    // is invariant under negating both vectors, so the mirrored pair agrees.
    if c.cross(from_center) >= 0.0 {
        let d = cone.leg_left;
        (d * v_rel.dot(d) - v_rel, d.perp())
    } else {
        let d = cone.leg_right;
        (d * v_rel.dot(d) - v_rel, -d.perp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidanceConstraint {
    pub halfplane: HalfPlane,
    pub w: Vec2,
    pub source_agent: Option<usize>,
}

impl AvoidanceConstraint {
    pub fn with_source(mut self, agent: usize) -> Self {
        self.source_agent = Some(agent);
        self
    }
}

/// Half-plane of A's velocities that, if B stays in its mirror half-plane,
/// keeps the relative velocity outside the obstacle. `va` and `vb` are the
/// velocities each agent is assumed to intend.
pub fn orca_halfplane(cone: &TruncatedCone, va: Vec2, vb: Vec2) -> AvoidanceConstraint {
    let (w, n) = closest_boundary_adjustment(cone, va - vb);
    AvoidanceConstraint { halfplane: HalfPlane { point: va + w * 0.5, normal: n }, w, source_agent: None }
}

/// Nearest velocity to `preferred` inside the speed disc and every
/// constraint. Infeasible sets return the least-violating velocity with
/// `feasible == false`.
pub fn permitted_velocity(constraints: &[AvoidanceConstraint], v_max: f64, preferred: Vec2) -> LpSolution {
    let soft: Vec<HalfPlane> = constraints.iter().map(|c| c.halfplane).collect();
    lp::solve(&[], &soft, v_max, preferred)
}
