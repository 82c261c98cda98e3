use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::sample_positions_avoiding;
use super::scenario::Scenario;
use crate::engine::{self, has_terminated, Termination, WorldState};
use crate::error::{Result, ScenarioError};
use crate::geom::{ConvexPolygon, Vec2};

/// One state of a run. Vectors are indexed like `TrajectoryLog::agents`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub iteration: u64,
    pub positions: Vec<Vec2>,
    /// Velocity applied during the step that produced this state; zero for
    /// the initial state.
    pub velocities: Vec<Vec2>,
    pub swarm_costs: Vec<f64>,
    /// Smallest pair gap over the step that produced this state (the static
    /// gap for the initial state).
    pub min_separation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentInfo {
    pub id: usize,
    pub swarm_id: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionEvent {
    /// Iteration of the state the offending step led to.
    pub iteration: u64,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub agents: Vec<AgentInfo>,
    pub records: Vec<Record>,
    pub termination: Termination,
    pub collisions: Vec<CollisionEvent>,
    /// Agents whose avoidance program was infeasible at least once.
    pub infeasible_agents: Vec<usize>,
}

impl TrajectoryLog {
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn final_positions(&self) -> &[Vec2] {
        self.records.last().map(|r| r.positions.as_slice()).unwrap_or(&[])
    }

    /// Minimum of the per-step separations over the whole run.
    pub fn min_separation(&self) -> f64 {
        self.records.iter().map(|r| r.min_separation).fold(f64::INFINITY, f64::min)
    }

    /// Positions of one swarm in the final state.
    pub fn final_swarm(&self, swarm: usize) -> Vec<Vec2> {
        self.agents.iter().zip(self.final_positions()).filter(|(a, _)| a.swarm_id == swarm).map(|(_, p)| *p).collect()
    }
}

impl Scenario {
    /// Start positions per swarm: explicit ones verbatim, sampled ones drawn
    /// from a stream seeded by `seed`, swarm after swarm, clear of every agent
    /// placed before.
    pub fn initial_positions(&self, seed: u64) -> Result<Vec<Vec<Vec2>>> {
        let arena = self.arena()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut placed: Vec<Vec2> = self.swarms.iter().filter_map(|s| s.positions.clone()).flatten().collect();
        let mut out = Vec::with_capacity(self.swarms.len());
        for (i, swarm) in self.swarms.iter().enumerate() {
            if let Some(ps) = &swarm.positions {
                out.push(ps.clone());
                continue;
            }
            let (Some(region), Some(count)) = (&swarm.region, swarm.count) else {
                return Err(ScenarioError::Invalid(format!("swarm {i} has neither positions nor region")).into());
            };
            let region =
                ConvexPolygon::new(region.clone()).map_err(|source| ScenarioError::Region { swarm: i, source })?;
            let ps = sample_positions_avoiding(&mut rng, &region, &arena, count, self.agent.radius, &placed)?;
            placed.extend_from_slice(&ps);
            out.push(ps);
        }
        Ok(out)
    }

    pub fn build_world(&self) -> Result<WorldState> {
        let positions = self.initial_positions(self.sim.seed)?;
        WorldState::new(self.arena()?, &positions, self.agent_params(), self.sim_params())
    }
}

/// Runs a scenario until convergence or the iteration limit.
pub fn run_scenario(s: &Scenario) -> Result<TrajectoryLog> {
    s.validate()?;
    let world = s.build_world()?;
    run_world(world, s.sim.eps, s.sim.max_iters)
}

pub fn run_world(mut world: WorldState, eps: f64, max_iters: u64) -> Result<TrajectoryLog> {
    let agents: Vec<AgentInfo> =
        world.agents().map(|a| AgentInfo { id: a.id, swarm_id: a.swarm_id, radius: a.radius }).collect();
    let mut records = vec![Record {
        iteration: world.iteration,
        positions: world.agents().map(|a| a.position).collect(),
        velocities: vec![Vec2::ZERO; agents.len()],
        swarm_costs: engine::swarm_costs(&world)?,
        min_separation: engine::min_pair_gap(&world),
    }];
    let mut collisions = Vec::new();
    let mut infeasible: Vec<usize> = Vec::new();

    let termination = loop {
        match has_terminated(&world, eps, max_iters) {
            Termination::Running => {}
            done => break done,
        }
        let (next, report) = engine::step(&world)?;
        collisions.extend(report.collisions.iter().map(|&(a, b)| CollisionEvent { iteration: next.iteration, a, b }));
        infeasible.extend_from_slice(&report.infeasible_agents);
        records.push(Record {
            iteration: next.iteration,
            positions: next.agents().map(|a| a.position).collect(),
            velocities: report.new_velocities,
            swarm_costs: report.swarm_costs,
            min_separation: report.min_separation,
        });
        world = next;
    };
    infeasible.sort_unstable();
    infeasible.dedup();

    Ok(TrajectoryLog { agents, records, termination, collisions, infeasible_agents: infeasible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{bundled, load_scenario, SwarmSpec};

    #[test]
    fn record_count_is_iterations_plus_one() {
        let mut s = load_scenario(bundled::EXAMPLE2).unwrap();
        s.sim.max_iters = 7;
        let log = run_scenario(&s).unwrap();
        assert_eq!(log.records.len(), 8);
        assert_eq!(log.iterations(), 7);
        assert_eq!(log.termination, Termination::MaxIters);
        assert_eq!(log.records[0].positions[0], Vec2::new(2.0, 1.0));
    }

    #[test]
    fn single_swarm_converges() {
        let mut s = load_scenario(bundled::EXAMPLE1).unwrap();
        s.swarms.truncate(1);
        let log = run_scenario(&s).unwrap();
        assert_eq!(log.termination, Termination::Converged);
        let arena = s.arena().unwrap();
        let finals = log.final_swarm(0);
        let d = crate::voronoi::voronoi_cells(&finals, &arena).unwrap();
        for (cell, x) in d.cells.iter().zip(&finals) {
            assert!(cell.centroid().unwrap().distance(*x) < s.sim.eps);
        }
    }

    #[test]
    fn sampled_swarms_do_not_overlap_each_other() {
        let mut s = load_scenario(bundled::MONTECARLO).unwrap();
        // Same region for both swarms forces cross-swarm rejection.
        let region = s.swarms[0].region.clone().unwrap();
        s.swarms[1] = SwarmSpec::sampled(region, 4);
        let ps = s.initial_positions(5).unwrap();
        let all: Vec<Vec2> = ps.concat();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert!(all[i].distance(all[j]) >= 0.4);
            }
        }
    }
}
