//! Voronoi coverage control for several independent swarms sharing one
//! convex arena, with reciprocal velocity-obstacle collision avoidance.
//!
//! The modules build on each other bottom-up: [`geom`] supplies polygons and
//! half-planes, [`voronoi`] partitions the arena per swarm, [`coverage`]
//! turns cells into costs, centroids and the Lloyd control law, [`orca`]
//! corrects velocities against neighbours, [`engine`] steps the whole world,
//! and [`harness`] loads scenarios, runs campaigns and writes trajectories.

pub mod coverage;
pub mod engine;
pub mod error;
pub mod geom;
pub mod harness;
pub mod orca;
pub mod voronoi;

pub use coverage::{CoverageReport, DensityField};
pub use engine::{Agent, AgentParams, SimParams, StepReport, Termination, WorldState};
pub use error::{Error, Result};
pub use geom::{ConvexPolygon, HalfPlane, Vec2};
pub use orca::{AvoidanceConstraint, TruncatedCone};
pub use voronoi::VoronoiDiagram;
