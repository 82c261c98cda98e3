//! Scenario documents (TOML).
//!
//! ```toml
//! [arena]
//! vertices = [[1, 0], [6, 0], [8, 5], [5, 8], [0, 4]]
//!
//! [agent]          # optional, defaults shown
//! radius = 0.2
//! gain = 1.0
//! v_max = 3.0
//! # peer_gain = 1.0  (defaults to gain)
//!
//! [sim]            # optional, defaults shown
//! dt = 0.1
//! # tau = 0.1        (defaults to dt)
//! max_iters = 1000
//! eps = 1e-3
//! avoidance = true
//! seed = 0
//!
//! [[swarm]]
//! positions = [[2, 1], [2, 1.5]]
//!
//! [[swarm]]
//! region = [[4.5, 5.5], [6, 5.5], [6, 7], [4.5, 7]]
//! count = 4
//! ```

use serde::{Deserialize, Serialize};

use crate::engine::{AgentParams, SimParams};
use crate::error::ScenarioError;
use crate::geom::{ConvexPolygon, Vec2, TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaSpec {
    pub vertices: Vec<Vec2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgentSpec {
    pub radius: f64,
    pub gain: f64,
    pub v_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peer_gain: Option<f64>,
}

impl Default for AgentSpec {
    fn default() -> Self {
        let d = AgentParams::default();
        AgentSpec { radius: d.radius, gain: d.gain, v_max: d.v_max, peer_gain: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSpec {
    pub dt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub max_iters: u64,
    pub eps: f64,
    pub avoidance: bool,
    pub seed: u64,
}

impl Default for SimSpec {
    fn default() -> Self {
        SimSpec { dt: 0.1, tau: None, max_iters: 1000, eps: 1e-3, avoidance: true, seed: 0 }
    }
}

/// Either explicit positions or a sampling region with an agent count.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwarmSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<Vec2>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Vec<Vec2>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl SwarmSpec {
    pub fn explicit(positions: Vec<Vec2>) -> Self {
        SwarmSpec { positions: Some(positions), ..Default::default() }
    }

    pub fn sampled(region: Vec<Vec2>, count: usize) -> Self {
        SwarmSpec { region: Some(region), count: Some(count), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub arena: ArenaSpec,
    #[serde(default)]
    pub agent: AgentSpec,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(rename = "swarm")]
    pub swarms: Vec<SwarmSpec>,
}

/// Default Monte Carlo start regions: lower-left and upper-right squares of
/// the pentagon arena.
pub fn default_regions() -> [Vec<Vec2>; 2] {
    let square = |x0: f64, y0: f64, x1: f64, y1: f64| {
        vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)]
    };
    [square(1.5, 0.5, 3.0, 2.0), square(4.5, 5.5, 6.0, 7.0)]
}

pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid(msg.into())
}

fn positive(name: &str, v: f64) -> Result<(), ScenarioError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Scenario {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn arena(&self) -> Result<ConvexPolygon, ScenarioError> {
        ConvexPolygon::new(self.arena.vertices.clone()).map_err(ScenarioError::Arena)
    }

    pub fn tau(&self) -> f64 {
        self.sim.tau.unwrap_or(self.sim.dt)
    }

    /// Minimum spacing between agents and from agents to the arena boundary:
    /// one radius for each body involved.
    pub fn clearance(&self) -> f64 {
        2.0 * self.agent.radius
    }

    pub fn agent_params(&self) -> AgentParams {
        AgentParams {
            radius: self.agent.radius,
            gain: self.agent.gain,
            v_max: self.agent.v_max,
            assumed_peer_gain: self.agent.peer_gain.unwrap_or(self.agent.gain),
        }
    }

    pub fn sim_params(&self) -> SimParams {
        SimParams { dt: self.sim.dt, tau: self.tau(), avoidance: self.sim.avoidance }
    }

    pub fn is_sampled(&self) -> bool {
        self.swarms.iter().any(|s| s.region.is_some())
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let arena = self.arena()?;
        positive("agent.radius", self.agent.radius)?;
        positive("agent.gain", self.agent.gain)?;
        positive("agent.v_max", self.agent.v_max)?;
        if let Some(g) = self.agent.peer_gain {
            positive("agent.peer_gain", g)?;
        }
        positive("sim.dt", self.sim.dt)?;
        positive("sim.tau", self.tau())?;
        positive("sim.eps", self.sim.eps)?;
        if self.sim.max_iters == 0 {
            return Err(invalid("sim.max_iters must be at least 1"));
        }
        if self.swarms.is_empty() {
            return Err(invalid("at least one [[swarm]] is required"));
        }

        let clearance = self.clearance();
        let mut explicit: Vec<(usize, Vec2)> = Vec::new();
        for (i, swarm) in self.swarms.iter().enumerate() {
            match (&swarm.positions, &swarm.region, swarm.count) {
                (Some(ps), None, None) => {
                    if ps.is_empty() {
                        return Err(invalid(format!("swarm {i}: positions is empty")));
                    }
                    for &p in ps {
                        let d = arena
                            .distance_to_boundary(p)
                            .map_err(|_| invalid(format!("swarm {i}: position {p} is outside the arena")))?;
                        if d < clearance - TOL {
                            return Err(invalid(format!(
                                "swarm {i}: position {p} is {d} from the arena boundary, needs {clearance}"
                            )));
                        }
                        explicit.push((i, p));
                    }
                }
                (None, Some(region), Some(count)) => {
                    if count == 0 {
                        return Err(invalid(format!("swarm {i}: count must be at least 1")));
                    }
                    let poly = ConvexPolygon::new(region.clone())
                        .map_err(|source| ScenarioError::Region { swarm: i, source })?;
                    if let Some(v) = poly.vertices().iter().find(|v| !arena.contains(**v)) {
                        return Err(invalid(format!("swarm {i}: region vertex {v} is outside the arena")));
                    }
                }
                _ => return Err(invalid(format!("swarm {i}: give either `positions` or both `region` and `count`"))),
            }
        }
        for a in 0..explicit.len() {
            for b in a + 1..explicit.len() {
                let d = explicit[a].1.distance(explicit[b].1);
                if d < clearance - TOL {
                    return Err(invalid(format!(
                        "positions {} (swarm {}) and {} (swarm {}) are {d} apart, need {clearance}",
                        explicit[a].1, explicit[a].0, explicit[b].1, explicit[b].0
                    )));
                }
            }
        }
        Ok(())
    }
}
