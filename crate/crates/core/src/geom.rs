//! Planar primitives: vectors, half-planes and convex polygons with their
//! area, centroid and second moment.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// Collinearity / containment tolerance in area units.
pub const TOL: f64 = 1e-9;

/// Half-plane classification slack used while clipping. Kept well below
/// [`TOL`] so freshly cut vertices are classified as inside on a second pass.
const CLIP_EPS: f64 = 1e-12;

/// Areas below this are treated as degenerate.
const AREA_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product; positive when `o` is
    /// counterclockwise of `self`.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotates by the angle whose cosine and sine are given.
    #[inline]
    pub fn rotate(self, cos: f64, sin: f64) -> Vec2 {
        Vec2::new(cos * self.x - sin * self.y, sin * self.x + cos * self.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2 { x, y }
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// `{ v : (v - point) . normal >= 0 }`, with `normal` of unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub point: Vec2,
    pub normal: Vec2,
}

impl HalfPlane {
    /// Normalizes `normal`; fails if it has zero length.
    pub fn new(point: Vec2, normal: Vec2) -> Result<Self, GeomError> {
        let normal = normal.normalized().ok_or(GeomError::ZeroNormal)?;
        Ok(HalfPlane { point, normal })
    }

    /// Positive inside, negative outside.
    #[inline]
    pub fn signed_distance(&self, v: Vec2) -> f64 {
        (v - self.point).dot(self.normal)
    }

    #[inline]
    pub fn contains(&self, v: Vec2) -> bool {
        self.signed_distance(v) >= 0.0
    }

    /// Direction of the boundary line with the permitted side on its left.
    #[inline]
    pub fn direction(&self) -> Vec2 {
        Vec2::new(self.normal.y, -self.normal.x)
    }

    /// Orthogonal projection onto the boundary line.
    pub fn project(&self, v: Vec2) -> Vec2 {
        v - self.normal * self.signed_distance(v)
    }
}

/// Counterclockwise convex polygon. An empty vertex list is the empty set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        ConvexPolygon::default()
    }

    /// Validates and builds a polygon from counterclockwise vertices.
    ///
    /// Consecutive vertices closer than [`TOL`] are rejected rather than merged
    /// so that user-supplied arenas are reported exactly as written.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeomError> {
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite(*v));
        }
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a.distance(b) < TOL {
                return Err(GeomError::DuplicateVertex { index: (i + 1) % n, vertex: b });
            }
        }
        let poly = ConvexPolygon { vertices };
        if poly.signed_area() <= AREA_EPS {
            return Err(GeomError::NotCounterClockwise);
        }
        for i in 0..n {
            let prev = poly.vertices[(i + n - 1) % n];
            let cur = poly.vertices[i];
            let next = poly.vertices[(i + 1) % n];
            let e0 = cur - prev;
            let e1 = next - cur;
            // Normalise by edge lengths so the test is scale independent.
            if e0.cross(e1) / (e0.norm() * e1.norm()) < -TOL {
                return Err(GeomError::Reflex { index: i, vertex: cur });
            }
        }
        Ok(poly)
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeomError> {
        ConvexPolygon::new(vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Directed edges `(a, b)` in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Inward half-plane of each edge. Degenerate edges are skipped.
    pub fn edge_halfplanes(&self) -> impl Iterator<Item = HalfPlane> + '_ {
        self.edges().filter_map(|(a, b)| HalfPlane::new(a, (b - a).perp()).ok())
    }

    fn signed_area(&self) -> f64 {
        let Some(&o) = self.vertices.first() else {
            return 0.0;
        };
        let twice: f64 = self.edges().map(|(a, b)| (a - o).cross(b - o)).sum();
        0.5 * twice
    }

    /// Shoelace area; zero for the empty polygon.
    pub fn area(&self) -> f64 {
        self.signed_area().max(0.0)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Result<Vec2, GeomError> {
        let Some(&o) = self.vertices.first() else {
            return Err(GeomError::Degenerate);
        };
        let mut twice_area = 0.0;
        let mut acc = Vec2::ZERO;
        for (a, b) in self.edges() {
            let (a, b) = (a - o, b - o);
            let c = a.cross(b);
            twice_area += c;
            acc += (a + b) * c;
        }
        if 0.5 * twice_area <= AREA_EPS {
            return Err(GeomError::Degenerate);
        }
        Ok(o + acc / (3.0 * twice_area))
    }

    /// `∫_P ‖p − q‖² dq`, evaluated exactly by fanning the polygon into
    /// triangles around its centroid.
    pub fn quadratic_moment(&self, p: Vec2) -> f64 {
        let Ok(g) = self.centroid() else {
            return 0.0;
        };
        self.edges()
            .map(|(a, b)| {
                let area = 0.5 * (a - g).cross(b - g);
                if area <= 0.0 {
                    return 0.0;
                }
                let tri_centroid = (g + a + b) / 3.0;
                // Polar moment of a triangle about its own centroid is
                // A (|ab|² + |bc|² + |ca|²) / 36.
                let sides = (a - g).norm_sq() + (b - a).norm_sq() + (g - b).norm_sq();
                area * ((tri_centroid - p).norm_sq() + sides / 36.0)
            })
            .sum()
    }

    /// Boundary points count as inside.
    pub fn contains(&self, p: Vec2) -> bool {
        !self.is_empty() && self.edge_halfplanes().all(|h| h.signed_distance(p) >= -TOL)
    }

    /// Distance from an interior point to the nearest edge.
    pub fn distance_to_boundary(&self, p: Vec2) -> Result<f64, GeomError> {
        if !self.contains(p) {
            return Err(GeomError::Outside(p));
        }
        Ok(self.edges().map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min))
    }

    /// Nearest point of the polygon to `p` (`p` itself when inside).
    pub fn closest_point(&self, p: Vec2) -> Option<Vec2> {
        if self.is_empty() {
            return None;
        }
        if self.contains(p) {
            return Some(p);
        }
        self.edges().map(|(a, b)| closest_on_segment(p, a, b)).min_by(|u, v| u.distance(p).total_cmp(&v.distance(p)))
    }

    /// Intersection with a half-plane. Never grows the polygon.
    pub fn clip(&self, hp: &HalfPlane) -> ConvexPolygon {
        let n = self.vertices.len();
        if n == 0 {
            return ConvexPolygon::empty();
        }
        let dist: Vec<f64> = self.vertices.iter().map(|&v| hp.signed_distance(v)).collect();
        if dist.iter().all(|&d| d >= -CLIP_EPS) {
            return self.clone();
        }
        if dist.iter().all(|&d| d < -CLIP_EPS) {
            return ConvexPolygon::empty();
        }

        let mut out: Vec<Vec2> = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (self.vertices[i], self.vertices[j]);
            let (da, db) = (dist[i], dist[j]);
            let a_in = da >= -CLIP_EPS;
            let b_in = db >= -CLIP_EPS;
            if a_in {
                out.push(a);
            }
            if a_in != b_in {
                let t = da / (da - db);
                out.push(a + (b - a) * t);
            }
        }
        ConvexPolygon::from_clipped(out)
    }

    /// Drops near-duplicate neighbours produced by clipping; collapses
    /// slivers to the empty polygon.
    fn from_clipped(mut v: Vec<Vec2>) -> ConvexPolygon {
        v.dedup_by(|b, a| a.distance(*b) < TOL);
        while v.len() > 1 && v[0].distance(v[v.len() - 1]) < TOL {
            v.pop();
        }
        if v.len() < 3 {
            return ConvexPolygon::empty();
        }
        let poly = ConvexPolygon { vertices: v };
        if poly.signed_area() <= AREA_EPS {
            return ConvexPolygon::empty();
        }
        poly
    }

    /// Smallest axis-aligned box `(min, max)` containing the polygon.
    pub fn bounds(&self) -> Option<(Vec2, Vec2)> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), v| {
            (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y)))
        }))
    }
}

pub fn closest_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * t
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    p.distance(closest_on_segment(p, a, b))
}
