//! Voronoi tessellation of a convex arena, built by clipping the arena with
//! one bisector half-plane per pair of generators.
//!
//! O(n²) per diagram. Swarms here hold tens of agents at most, and clipping
//! yields cells that are already bounded by the arena.

use crate::error::VoronoiError;
use crate::geom::{ConvexPolygon, HalfPlane, Vec2, TOL};

/// Cells are index-aligned with the generators they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram {
    pub cells: Vec<ConvexPolygon>,
}

impl VoronoiDiagram {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the first cell containing `q`.
    pub fn owner(&self, q: Vec2) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(q))
    }
}

/// Half-plane of points at least as close to `own` as to `other`.
pub fn bisector(own: Vec2, other: Vec2) -> HalfPlane {
    HalfPlane {
        point: (own + other) * 0.5,
        normal: (own - other).normalized().expect("bisector of coincident generators"),
    }
}

/// Cell of generator `index`: the arena clipped against the bisector with
/// every other generator. Points exactly on a bisector belong to both cells.
pub fn voronoi_cell(generators: &[Vec2], index: usize, arena: &ConvexPolygon) -> ConvexPolygon {
    let own = generators[index];
    let mut cell = arena.clone();
    for (j, &other) in generators.iter().enumerate() {
        if j == index {
            continue;
        }
        cell = cell.clip(&bisector(own, other));
        if cell.is_empty() {
            break;
        }
    }
    cell
}

pub fn voronoi_cells(generators: &[Vec2], arena: &ConvexPolygon) -> Result<VoronoiDiagram, VoronoiError> {
    for (index, &point) in generators.iter().enumerate() {
        if !arena.contains(point) {
            return Err(VoronoiError::GeneratorOutside { index, point });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if generators[i].distance(generators[j]) <= TOL {
                return Err(VoronoiError::DuplicateGenerators { first: i, second: j, point: generators[i] });
            }
        }
    }
    let cells = (0..generators.len()).map(|i| voronoi_cell(generators, i, arena)).collect();
    Ok(VoronoiDiagram { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn two_generators_split_square() {
        let gens = [Vec2::new(0.25, 0.5), Vec2::new(0.75, 0.5)];
        let d = voronoi_cells(&gens, &unit_square()).unwrap();
        for cell in &d.cells {
            assert!((cell.area() - 0.5).abs() < 1e-15);
        }
        assert!(d.cells[0].vertices().iter().all(|v| v.x <= 0.5 + 1e-15));
        assert!(d.cells[1].vertices().iter().all(|v| v.x >= 0.5 - 1e-15));
    }

    #[test]
    fn single_generator_owns_arena() {
        let sq = unit_square();
        let d = voronoi_cells(&[Vec2::new(0.1, 0.9)], &sq).unwrap();
        assert_eq!(d.cells, vec![sq]);
    }

    #[test]
    fn empty_generator_set() {
        assert!(voronoi_cells(&[], &unit_square()).unwrap().is_empty());
    }

    #[test]
    fn duplicate_generators_rejected() {
        let gens = [Vec2::new(0.2, 0.2), Vec2::new(0.7, 0.7), Vec2::new(0.2, 0.2)];
        assert_eq!(
            voronoi_cells(&gens, &unit_square()),
            Err(VoronoiError::DuplicateGenerators { first: 0, second: 2, point: gens[0] })
        );
    }

    #[test]
    fn outside_generator_rejected() {
        let gens = [Vec2::new(0.2, 0.2), Vec2::new(1.5, 0.5)];
        assert!(matches!(voronoi_cells(&gens, &unit_square()), Err(VoronoiError::GeneratorOutside { index: 1, .. })));
    }

    #[test]
    fn boundary_points_equidistant() {
        let gens = [Vec2::new(0.2, 0.3), Vec2::new(0.8, 0.6), Vec2::new(0.4, 0.85)];
        let d = voronoi_cells(&gens, &unit_square()).unwrap();
        for (i, cell) in d.cells.iter().enumerate() {
            for (a, b) in cell.edges() {
                let mid = (a + b) * 0.5;
                for (j, other) in d.cells.iter().enumerate() {
                    if j != i && other.contains(mid) {
                        let di = mid.distance(gens[i]);
                        let dj = mid.distance(gens[j]);
                        assert!((di - dj).abs() < 1e-6, "cells {i},{j}: {di} vs {dj}");
                    }
                }
            }
        }
    }
}
