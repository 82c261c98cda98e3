//! Coverage cost, cell mass and center of mass, the analytic cost gradient,
//! and the Lloyd control law.
//!
//! The cost of a configuration is the density-weighted integral of the
//! squared distance from each point of the arena to its nearest agent. With
//! cells fixed, its derivative with respect to agent `j` is
//! `2 M_j (x_j − CM_j)`: it vanishes exactly at a centroidal configuration.

use crate::error::{GeomError, VoronoiError};
use crate::geom::{ConvexPolygon, Vec2};
use crate::voronoi::{voronoi_cells, VoronoiDiagram};

/// Coverage priority over the arena. Only constant density is supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityField {
    Uniform(f64),
}

impl DensityField {
    pub fn uniform(value: f64) -> Option<Self> {
        (value > 0.0 && value.is_finite()).then_some(DensityField::Uniform(value))
    }
}

impl Default for DensityField {
    fn default() -> Self {
        DensityField::Uniform(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub cost: f64,
    pub masses: Vec<f64>,
    pub centroids: Vec<Vec2>,
}

pub fn cell_mass(cell: &ConvexPolygon, phi: DensityField) -> f64 {
    match phi {
        DensityField::Uniform(rho) => rho * cell.area(),
    }
}

pub fn cell_center_of_mass(cell: &ConvexPolygon, phi: DensityField) -> Result<Vec2, GeomError> {
    match phi {
        // The density cancels between numerator and mass.
        DensityField::Uniform(_) => cell.centroid(),
    }
}

fn cell_cost(cell: &ConvexPolygon, generator: Vec2, phi: DensityField) -> f64 {
    match phi {
        DensityField::Uniform(rho) => rho * cell.quadratic_moment(generator),
    }
}

/// Cost, masses and centroids for an already-built diagram. A degenerate
/// cell reports zero mass and its own generator as centroid.
pub fn coverage_report(positions: &[Vec2], diagram: &VoronoiDiagram, phi: DensityField) -> CoverageReport {
    let mut cost = 0.0;
    let mut masses = Vec::with_capacity(positions.len());
    let mut centroids = Vec::with_capacity(positions.len());
    for (cell, &x) in diagram.cells.iter().zip(positions) {
        cost += cell_cost(cell, x, phi);
        masses.push(cell_mass(cell, phi));
        centroids.push(cell_center_of_mass(cell, phi).unwrap_or(x));
    }
    CoverageReport { cost, masses, centroids }
}

pub fn coverage_cost(positions: &[Vec2], arena: &ConvexPolygon, phi: DensityField) -> Result<f64, VoronoiError> {
    let diagram = voronoi_cells(positions, arena)?;
    Ok(positions.iter().zip(&diagram.cells).map(|(&x, cell)| cell_cost(cell, x, phi)).sum())
}

pub fn coverage_gradient(
    positions: &[Vec2],
    arena: &ConvexPolygon,
    phi: DensityField,
) -> Result<Vec<Vec2>, VoronoiError> {
    let diagram = voronoi_cells(positions, arena)?;
    let report = coverage_report(positions, &diagram, phi);
    Ok(positions
        .iter()
        .zip(report.masses.iter().zip(&report.centroids))
        .map(|(&x, (&m, &cm))| (x - cm) * (2.0 * m))
        .collect())
}

/// `c (cm − x)`: proportional pull toward the cell centroid.
#[inline]
pub fn lloyd_velocity(x: Vec2, cm: Vec2, gain: f64) -> Vec2 {
    (cm - x) * gain
}
