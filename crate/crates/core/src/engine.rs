//! Multi-swarm simulation loop.
//!
//! Every iteration each agent builds the Voronoi diagram of its own swarm,
//! derives its preferred Lloyd velocity, estimates the preferred velocity of
//! every other agent by running the same computation on that agent's swarm,
//! and corrects its own velocity against one reciprocal half-plane per
//! neighbour. Velocities are computed from a frozen snapshot and applied to
//! all agents at once.

use std::collections::VecDeque;

use crate::coverage::{coverage_report, lloyd_velocity, DensityField};
use crate::error::{Error, GeomError, Result};
use crate::geom::{ConvexPolygon, HalfPlane, Vec2};
use crate::orca::{self, lp, AvoidanceConstraint};
use crate::voronoi::voronoi_cells;

/// Separation below which two agents count as colliding.
pub const COLLISION_TOL: f64 = 1e-9;

/// Consecutive settled iterations required to declare convergence.
pub const SETTLE_ITERATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub id: usize,
    pub swarm_id: usize,
    pub position: Vec2,
    pub radius: f64,
    pub gain: f64,
    pub v_max: f64,
    /// Gain this agent assumes every other agent uses.
    pub assumed_peer_gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub arena: ConvexPolygon,
    pub swarms: Vec<Vec<Agent>>,
    pub time_step: f64,
    pub tau: f64,
    pub iteration: u64,
    pub avoidance_enabled: bool,
    /// Largest distance between an agent and its cell centroid for the most
    /// recent states, newest last, at most [`SETTLE_ITERATIONS`] long.
    pub residual_history: VecDeque<f64>,
}

/// Tunables shared by all agents of a world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentParams {
    pub radius: f64,
    pub gain: f64,
    pub v_max: f64,
    pub assumed_peer_gain: f64,
}

impl Default for AgentParams {
    fn default() -> Self {
        AgentParams { radius: 0.2, gain: 1.0, v_max: 3.0, assumed_peer_gain: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub dt: f64,
    pub tau: f64,
    pub avoidance: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams { dt: 0.1, tau: 0.1, avoidance: true }
    }
}

impl WorldState {
    /// Builds a world from per-swarm initial positions. Agent ids run
    /// consecutively across swarms.
    pub fn new(arena: ConvexPolygon, positions: &[Vec<Vec2>], agent: AgentParams, sim: SimParams) -> Result<Self> {
        let invalid = |what: &str| Error::Scenario(crate::error::ScenarioError::Invalid(what.to_string()));
        if positions.is_empty() || positions.iter().any(Vec::is_empty) {
            return Err(invalid("every world needs at least one swarm and every swarm an agent"));
        }
        if ![sim.dt, sim.tau].iter().all(|&v| v > 0.0) {
            return Err(invalid("dt and tau must be positive"));
        }
        if ![agent.radius, agent.gain, agent.v_max, agent.assumed_peer_gain].iter().all(|&v| v > 0.0) {
            return Err(invalid("radius, gain, v_max and peer gain must be positive"));
        }
        let mut id = 0;
        let mut swarms = Vec::with_capacity(positions.len());
        for (swarm_id, ps) in positions.iter().enumerate() {
            let mut swarm = Vec::with_capacity(ps.len());
            for &p in ps {
                if !arena.contains(p) {
                    return Err(GeomError::Outside(p).into());
                }
                swarm.push(Agent {
                    id,
                    swarm_id,
                    position: p,
                    radius: agent.radius,
                    gain: agent.gain,
                    v_max: agent.v_max,
                    assumed_peer_gain: agent.assumed_peer_gain,
                });
                id += 1;
            }
            swarms.push(swarm);
        }
        let mut world = WorldState {
            arena,
            swarms,
            time_step: sim.dt,
            tau: sim.tau,
            iteration: 0,
            avoidance_enabled: sim.avoidance,
            residual_history: VecDeque::with_capacity(SETTLE_ITERATIONS),
        };
        let residual = Snapshot::capture(&world)?.residual();
        world.push_residual(residual);
        Ok(world)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.swarms.iter().flatten()
    }

    pub fn agent_count(&self) -> usize {
        self.swarms.iter().map(Vec::len).sum()
    }

    pub fn swarm_positions(&self, swarm: usize) -> Vec<Vec2> {
        self.swarms[swarm].iter().map(|a| a.position).collect()
    }

    /// Largest agent-to-centroid distance in the current state.
    pub fn centroid_residual(&self) -> f64 {
        self.residual_history.back().copied().unwrap_or(f64::INFINITY)
    }

    fn push_residual(&mut self, r: f64) {
        if self.residual_history.len() == SETTLE_ITERATIONS {
            self.residual_history.pop_front();
        }
        self.residual_history.push_back(r);
    }
}

/// Per-swarm diagram data derived from one set of positions.
#[derive(Debug, Clone)]
struct SwarmSnapshot {
    positions: Vec<Vec2>,
    centroids: Vec<Vec2>,
    cost: f64,
}

#[derive(Debug, Clone)]
struct Snapshot {
    swarms: Vec<SwarmSnapshot>,
}

impl Snapshot {
    fn capture(world: &WorldState) -> Result<Self> {
        let swarms = (0..world.swarms.len())
            .map(|s| {
                let positions = world.swarm_positions(s);
                let diagram = voronoi_cells(&positions, &world.arena)?;
                let report = coverage_report(&positions, &diagram, DensityField::default());
                Ok(SwarmSnapshot { positions, centroids: report.centroids, cost: report.cost })
            })
            .collect::<Result<_>>()?;
        Ok(Snapshot { swarms })
    }

    fn residual(&self) -> f64 {
        self.swarms
            .iter()
            .flat_map(|s| s.positions.iter().zip(&s.centroids).map(|(x, c)| x.distance(*c)))
            .fold(0.0, f64::max)
    }
}

/// Preferred velocity another agent is assumed to pursue: the Lloyd law
/// evaluated on that agent's own swarm with the observer's gain estimate.
pub fn estimate_peer_velocity(
    peer_index: usize,
    peer_swarm_positions: &[Vec2],
    arena: &ConvexPolygon,
    assumed_gain: f64,
) -> Result<Vec2> {
    let diagram = voronoi_cells(peer_swarm_positions, arena)?;
    let x = peer_swarm_positions[peer_index];
    let cm = diagram.cells[peer_index].centroid()?;
    Ok(lloyd_velocity(x, cm, assumed_gain))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentVelocity {
    pub velocity: Vec2,
    pub preferred: Vec2,
    pub feasible: bool,
}

/// Collision-free velocity for one agent given the current world.
pub fn agent_velocity(world: &WorldState, swarm: usize, agent: usize) -> Result<AgentVelocity> {
    let snapshot = Snapshot::capture(world)?;
    compute_velocity(world, &snapshot, swarm, agent)
}

fn compute_velocity(world: &WorldState, snap: &Snapshot, swarm: usize, index: usize) -> Result<AgentVelocity> {
    let me = &world.swarms[swarm][index];
    let own = &snap.swarms[swarm];
    let preferred = lloyd_velocity(me.position, own.centroids[index], me.gain);
    if !world.avoidance_enabled {
        return Ok(AgentVelocity { velocity: preferred, preferred, feasible: true });
    }

    let mut constraints: Vec<AvoidanceConstraint> = Vec::with_capacity(world.agent_count());
    for (l, other_swarm) in world.swarms.iter().enumerate() {
        let peers = &snap.swarms[l];
        for (k, other) in other_swarm.iter().enumerate() {
            if (l, k) == (swarm, index) {
                continue;
            }
            let peer_pref = lloyd_velocity(peers.positions[k], peers.centroids[k], me.assumed_peer_gain);
            let mut cone = orca::velocity_obstacle(me.position, other.position, me.radius, other.radius, world.tau)?;
            if cone.is_overlapping() {
                // Recovery from overlap is resolved over a single step.
                cone = orca::velocity_obstacle(me.position, other.position, me.radius, other.radius, world.time_step)?;
            }
            constraints.push(orca::orca_halfplane(&cone, preferred, peer_pref).with_source(other.id));
        }
    }

    let boundary = arena_constraints(&world.arena, me, world.time_step);
    let soft: Vec<HalfPlane> = constraints.iter().map(|c| c.halfplane).collect();
    let sol = lp::solve(&boundary, &soft, me.v_max, preferred);
    Ok(AgentVelocity { velocity: sol.velocity, preferred, feasible: sol.feasible })
}

/// Hard velocity constraints keeping the agent's disc inside the arena over
/// the next step. Only edges the agent could reach are included. An agent
/// already closer to an edge than its radius may not move further out.
fn arena_constraints(arena: &ConvexPolygon, agent: &Agent, dt: f64) -> Vec<HalfPlane> {
    let reach = agent.v_max * dt + agent.radius;
    arena
        .edge_halfplanes()
        .filter_map(|edge| {
            let d = edge.signed_distance(agent.position);
            if d >= reach {
                return None;
            }
            let clearance = agent.radius.min(d.max(0.0));
            // (x + v dt − p)·n ≥ clearance  ⇔  v·n ≥ (clearance − d)/dt
            let offset = (clearance - d) / dt;
            Some(HalfPlane { point: edge.normal * offset, normal: edge.normal })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// Indexed like `WorldState::agents()`.
    pub new_velocities: Vec<Vec2>,
    pub infeasible_agents: Vec<usize>,
    /// Smallest gap (center distance minus radius sum) reached by any pair
    /// while moving linearly through the step.
    pub min_separation: f64,
    /// Pairs whose gap dropped below `-COLLISION_TOL` during the step.
    pub collisions: Vec<(usize, usize)>,
    /// Coverage cost of each swarm's own diagram after the step.
    pub swarm_costs: Vec<f64>,
}

/// Minimum over `t ∈ [0, dt]` of `|rel + t·rel_vel|` for linearly moving
/// points.
pub fn min_distance_during(rel: Vec2, rel_vel: Vec2, dt: f64) -> f64 {
    let speed_sq = rel_vel.norm_sq();
    let t = if speed_sq > 0.0 { (-rel.dot(rel_vel) / speed_sq).clamp(0.0, dt) } else { 0.0 };
    (rel + rel_vel * t).norm()
}

/// Advances every agent by one step from a common snapshot.
pub fn step(world: &WorldState) -> Result<(WorldState, StepReport)> {
    let snap = Snapshot::capture(world)?;
    let mut velocities = Vec::with_capacity(world.agent_count());
    let mut infeasible = Vec::new();
    for (s, swarm) in world.swarms.iter().enumerate() {
        for (i, agent) in swarm.iter().enumerate() {
            let v = compute_velocity(world, &snap, s, i)?;
            if !v.feasible {
                infeasible.push(agent.id);
            }
            velocities.push(v.velocity);
        }
    }

    let dt = world.time_step;
    let agents: Vec<&Agent> = world.agents().collect();
    let mut min_separation = f64::INFINITY;
    let mut collisions = Vec::new();
    for i in 0..agents.len() {
        for j in i + 1..agents.len() {
            let rel = agents[j].position - agents[i].position;
            let rel_vel = velocities[j] - velocities[i];
            let gap = min_distance_during(rel, rel_vel, dt) - (agents[i].radius + agents[j].radius);
            min_separation = min_separation.min(gap);
            if gap < -COLLISION_TOL {
                collisions.push((agents[i].id, agents[j].id));
            }
        }
    }

    let mut next = world.clone();
    for (k, agent) in next.swarms.iter_mut().flatten().enumerate() {
        let target = agent.position + velocities[k] * dt;
        agent.position = if next.arena.contains(target) {
            target
        } else {
            next.arena.closest_point(target).unwrap_or(agent.position)
        };
    }
    next.iteration += 1;
    let next_snap = Snapshot::capture(&next)?;
    next.push_residual(next_snap.residual());

    let report = StepReport {
        new_velocities: velocities,
        infeasible_agents: infeasible,
        min_separation,
        collisions,
        swarm_costs: next_snap.swarms.iter().map(|s| s.cost).collect(),
    };
    Ok((next, report))
}

/// Coverage cost of each swarm's own diagram.
pub fn swarm_costs(world: &WorldState) -> Result<Vec<f64>> {
    Ok(Snapshot::capture(world)?.swarms.iter().map(|s| s.cost).collect())
}

/// Static gap between the closest pair of agents; infinite for one agent.
pub fn min_pair_gap(world: &WorldState) -> f64 {
    let agents: Vec<&Agent> = world.agents().collect();
    let mut gap = f64::INFINITY;
    for i in 0..agents.len() {
        for j in i + 1..agents.len() {
            let d = agents[i].position.distance(agents[j].position) - (agents[i].radius + agents[j].radius);
            gap = gap.min(d);
        }
    }
    gap
}

/// Unordered pairs of agent ids whose discs overlap. Touching is allowed.
pub fn detect_collisions(world: &WorldState) -> Vec<(usize, usize)> {
    let agents: Vec<&Agent> = world.agents().collect();
    let mut out = Vec::new();
    for i in 0..agents.len() {
        for j in i + 1..agents.len() {
            let d = agents[i].position.distance(agents[j].position);
            if d < agents[i].radius + agents[j].radius - COLLISION_TOL {
                out.push((agents[i].id, agents[j].id));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Running,
    Converged,
    MaxIters,
}

/// Converged once every agent has stayed within `eps` of its centroid for
/// [`SETTLE_ITERATIONS`] consecutive states.
pub fn has_terminated(world: &WorldState, eps: f64, max_iters: u64) -> Termination {
    let h = &world.residual_history;
    if h.len() == SETTLE_ITERATIONS && h.iter().all(|&r| r < eps) {
        Termination::Converged
    } else if world.iteration >= max_iters {
        Termination::MaxIters
    } else {
        Termination::Running
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    fn pentagon() -> ConvexPolygon {
        ConvexPolygon::new(
            [(1.0, 0.0), (6.0, 0.0), (8.0, 5.0), (5.0, 8.0), (0.0, 4.0)]
                .iter()
                .map(|&(x, y)| Vec2::new(x, y))
                .collect(),
        )
        .unwrap()
    }

    fn pts(v: &[(f64, f64)]) -> Vec<Vec2> {
        v.iter().map(|&(x, y)| Vec2::new(x, y)).collect()
    }

    fn sim(dt: f64, avoidance: bool) -> SimParams {
        SimParams { dt, tau: dt, avoidance }
    }

    #[test]
    fn peer_estimate() {
        let sq = unit_square();
        let v = estimate_peer_velocity(0, &[Vec2::new(0.5, 0.5)], &sq, 1.0).unwrap();
        assert!(v.norm() < 1e-15);
        let v = estimate_peer_velocity(0, &[Vec2::new(0.3, 0.5)], &sq, 1.0).unwrap();
        assert!((v - Vec2::new(0.2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn peer_estimate_matches_true_preference_with_true_gain() {
        let arena = pentagon();
        let swarm = pts(&[(2.0, 1.0), (2.0, 1.5), (2.5, 1.0), (2.5, 1.5)]);
        let world = WorldState::new(
            arena.clone(),
            std::slice::from_ref(&swarm),
            AgentParams { gain: 1.7, assumed_peer_gain: 1.7, ..Default::default() },
            sim(0.1, true),
        )
        .unwrap();
        for i in 0..swarm.len() {
            let truth = agent_velocity(&world, 0, i).unwrap().preferred;
            let est = estimate_peer_velocity(i, &swarm, &arena, 1.7).unwrap();
            assert_eq!(truth, est);
        }
    }

    #[test]
    fn lone_agent_follows_lloyd() {
        let world =
            WorldState::new(unit_square(), &[pts(&[(0.3, 0.5)])], AgentParams::default(), sim(0.1, true)).unwrap();
        let v = agent_velocity(&world, 0, 0).unwrap();
        assert!((v.velocity - Vec2::new(0.2, 0.0)).norm() < 1e-15);
        assert_eq!(v.velocity, v.preferred);
    }

    #[test]
    fn centered_agent_stays() {
        let world =
            WorldState::new(unit_square(), &[pts(&[(0.5, 0.5)])], AgentParams::default(), sim(0.1, true)).unwrap();
        let (next, report) = step(&world).unwrap();
        assert_eq!(next.swarms[0][0].position, Vec2::new(0.5, 0.5));
        assert_eq!(report.new_velocities, vec![Vec2::ZERO]);
    }

    #[test]
    fn unit_gain_step_lands_on_centroid() {
        let world = WorldState::new(
            unit_square(),
            &[pts(&[(0.3, 0.5)])],
            AgentParams { radius: 0.05, ..Default::default() },
            sim(1.0, false),
        )
        .unwrap();
        let (next, _) = step(&world).unwrap();
        assert!((next.swarms[0][0].position - Vec2::new(0.5, 0.5)).norm() < 1e-15);
        assert_eq!(next.iteration, 1);
    }

    #[test]
    fn example_one_first_velocity_points_to_own_centroid() {
        let arena = pentagon();
        let s1 = pts(&[(2.0, 1.0), (2.0, 1.5), (2.5, 1.0), (2.5, 1.5)]);
        let s2 = pts(&[(5.0, 6.0), (5.0, 6.5), (5.5, 6.0), (5.5, 6.5)]);
        let world = WorldState::new(arena.clone(), &[s1.clone(), s2], AgentParams::default(), sim(0.1, false)).unwrap();
        let cell = crate::voronoi::voronoi_cell(&s1, 0, &arena);
        let cm = cell.centroid().unwrap();
        let v = agent_velocity(&world, 0, 0).unwrap().velocity;
        assert!((v - (cm - Vec2::new(2.0, 1.0))).norm() < 1e-12);
    }

    #[test]
    fn collision_detection_threshold() {
        let params = AgentParams { radius: 0.2, ..Default::default() };
        let arena = unit_square();
        let close =
            WorldState::new(arena.clone(), &[pts(&[(0.3, 0.5), (0.69, 0.5)])], params, sim(0.1, false)).unwrap();
        assert_eq!(detect_collisions(&close), vec![(0, 1)]);
        let touching = WorldState::new(arena, &[pts(&[(0.3, 0.5), (0.7, 0.5)])], params, sim(0.1, false)).unwrap();
        assert!(detect_collisions(&touching).is_empty());
    }

    #[test]
    fn termination_states() {
        let mut world =
            WorldState::new(unit_square(), &[pts(&[(0.5, 0.5)])], AgentParams::default(), sim(0.1, true)).unwrap();
        assert_eq!(has_terminated(&world, 1e-3, 1000), Termination::Running);
        for _ in 0..SETTLE_ITERATIONS - 1 {
            world = step(&world).unwrap().0;
        }
        assert_eq!(has_terminated(&world, 1e-3, 1000), Termination::Converged);

        let mut moving =
            WorldState::new(unit_square(), &[pts(&[(0.2, 0.2)])], AgentParams::default(), sim(0.1, true)).unwrap();
        moving.iteration = 5;
        assert_eq!(has_terminated(&moving, 1e-3, 5), Termination::MaxIters);
    }

    #[test]
    fn closest_approach_between_steps() {
        // Passing through each other mid-step.
        let d = min_distance_during(Vec2::new(1.0, 0.1), Vec2::new(-20.0, 0.0), 0.1);
        assert!((d - 0.1).abs() < 1e-12);
        // Separating: distance at t = 0.
        let d = min_distance_during(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), 0.1);
        assert_eq!(d, 1.0);
    }

    #[test]
    fn arena_constraints_keep_agent_inside() {
        let arena = unit_square();
        let world = WorldState::new(
            arena.clone(),
            &[pts(&[(0.25, 0.5)]), pts(&[(0.8, 0.5)])],
            AgentParams { radius: 0.2, v_max: 3.0, ..Default::default() },
            sim(0.1, true),
        )
        .unwrap();
        let agent = &world.swarms[0][0];
        let hp = arena_constraints(&arena, agent, 0.1);
        // Left edge only reachable at distance 0.25 < 0.3 + 0.2, bottom/top too.
        assert!(!hp.is_empty());
        let v = Vec2::new(-3.0, 0.0);
        assert!(hp.iter().any(|h| !h.contains(v)));
        let mut w = world;
        for _ in 0..50 {
            let (next, _) = step(&w).unwrap();
            for a in next.agents() {
                assert!(arena.contains(a.position));
            }
            w = next;
        }
    }
}
