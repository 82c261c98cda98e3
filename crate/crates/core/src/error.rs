use thiserror::Error;

use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("half-plane normal has zero length")]
    ZeroNormal,
    #[error("non-finite coordinate {0}")]
    NonFinite(Vec2),
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} at {vertex} coincides with its predecessor")]
    DuplicateVertex { index: usize, vertex: Vec2 },
    #[error("polygon vertices are not in counterclockwise order (or the polygon has no area)")]
    NotCounterClockwise,
    #[error("polygon is not convex: reflex vertex {index} at {vertex}")]
    Reflex { index: usize, vertex: Vec2 },
    #[error("polygon has zero area, centroid undefined")]
    Degenerate,
    #[error("point {0} lies outside the polygon")]
    Outside(Vec2),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VoronoiError {
    #[error("generators {first} and {second} coincide at {point}")]
    DuplicateGenerators { first: usize, second: usize, point: Vec2 },
    #[error("generator {index} at {point} lies outside the arena")]
    GeneratorOutside { index: usize, point: Vec2 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrcaError {
    #[error("agents occupy the same position {0}; the obstacle cone has no axis")]
    CoincidentPositions(Vec2),
    #[error("time horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("invalid arena: {0}")]
    Arena(#[source] GeomError),
    #[error("swarm {swarm}: {source}")]
    Region {
        swarm: usize,
        #[source]
        source: GeomError,
    },
    #[error(
        "could not place {requested} agents with clearance {clearance} after {attempts} attempts (placed {placed})"
    )]
    PackingInfeasible { requested: usize, placed: usize, clearance: f64, attempts: usize },
}

/// Crate-level error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Voronoi(#[from] VoronoiError),
    #[error(transparent)]
    Orca(#[from] OrcaError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
