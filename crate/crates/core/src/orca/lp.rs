//! Incremental 2D program: the point of `D(0, r) ∩ half-planes` nearest a
//! preferred velocity.
//!
//! Each constraint is inserted in turn; when the running optimum violates
//! the new one, the optimum moves onto that constraint's boundary line and a
//! 1D program over the earlier constraints is solved there. When the
//! constraints have no common point inside the disc, a second pass finds the
//! velocity minimising the largest violation of the soft constraints while
//! keeping the hard ones.

use crate::geom::{HalfPlane, Vec2};

const EPS: f64 = 1e-12;

/// Boundary line with the permitted side on the left of `dir`.
#[derive(Debug, Clone, Copy)]
struct Line {
    point: Vec2,
    dir: Vec2,
}

impl Line {
    fn from_halfplane(h: &HalfPlane) -> Self {
        Line { point: h.point, dir: h.direction() }
    }

    /// Positive when `v` is on the forbidden side.
    #[inline]
    fn violation(&self, v: Vec2) -> f64 {
        self.dir.cross(self.point - v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSolution {
    pub velocity: Vec2,
    /// False when the fallback (least maximum violation) was used.
    pub feasible: bool,
}

/// Solves with `hard` constraints that are never relaxed and `soft` ones that
/// are relaxed uniformly when the problem is infeasible.
pub fn solve(hard: &[HalfPlane], soft: &[HalfPlane], radius: f64, preferred: Vec2) -> LpSolution {
    let start = clamp_to_disc(preferred, radius);
    let mut order: Vec<(usize, f64)> = soft.iter().enumerate().map(|(i, h)| (i, -h.signed_distance(start))).collect();
    // Most violated first; ties keep input order.
    order.sort_by(|a, b| b.1.total_cmp(&a.1));

    let lines: Vec<Line> = hard
        .iter()
        .map(Line::from_halfplane)
        .chain(order.iter().map(|&(i, _)| Line::from_halfplane(&soft[i])))
        .collect();

    match solve_2d(&lines, radius, preferred, false) {
        Ok(velocity) => LpSolution { velocity, feasible: true },
        Err((failed, partial)) => {
            LpSolution { velocity: solve_relaxed(&lines, hard.len(), failed, radius, partial), feasible: false }
        }
    }
}

fn clamp_to_disc(v: Vec2, radius: f64) -> Vec2 {
    let n = v.norm_sq();
    if n > radius * radius {
        v * (radius / n.sqrt())
    } else {
        v
    }
}

/// Optimum on line `index` subject to lines `0..index` and the disc.
fn solve_1d(lines: &[Line], index: usize, radius: f64, target: Vec2, direction_opt: bool) -> Option<Vec2> {
    let line = lines[index];
    let dot = line.point.dot(line.dir);
    let disc = dot * dot + radius * radius - line.point.norm_sq();
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut t_left = -dot - sq;
    let mut t_right = -dot + sq;

    for other in &lines[..index] {
        let denom = line.dir.cross(other.dir);
        let numer = other.dir.cross(line.point - other.point);
        if denom.abs() <= EPS {
            if numer < 0.0 {
                return None;
            }
            continue;
        }
        let t = numer / denom;
        if denom >= 0.0 {
            t_right = t_right.min(t);
        } else {
            t_left = t_left.max(t);
        }
        if t_left > t_right {
            return None;
        }
    }

    let t = if direction_opt {
        if target.dot(line.dir) > 0.0 {
            t_right
        } else {
            t_left
        }
    } else {
        line.dir.dot(target - line.point).clamp(t_left, t_right)
    };
    Some(line.point + line.dir * t)
}

/// On failure returns the index of the first unsatisfiable line and the
/// optimum over the lines before it.
fn solve_2d(lines: &[Line], radius: f64, target: Vec2, direction_opt: bool) -> Result<Vec2, (usize, Vec2)> {
    let mut result = if direction_opt { target * radius } else { clamp_to_disc(target, radius) };
    for (i, line) in lines.iter().enumerate() {
        if line.violation(result) > 0.0 {
            let previous = result;
            result = solve_1d(lines, i, radius, target, direction_opt).ok_or((i, previous))?;
        }
    }
    Ok(result)
}

fn solve_relaxed(lines: &[Line], hard_count: usize, begin: usize, radius: f64, mut result: Vec2) -> Vec2 {
    let mut worst = 0.0;
    for i in begin.max(hard_count)..lines.len() {
        let line = lines[i];
        if line.violation(result) <= worst {
            continue;
        }
        let mut projected: Vec<Line> = lines[..hard_count].to_vec();
        for other in &lines[hard_count..i] {
            let det = line.dir.cross(other.dir);
            let point = if det.abs() <= EPS {
                if line.dir.dot(other.dir) > 0.0 {
                    // Same orientation: `other` never binds tighter here.
                    continue;
                }
                (line.point + other.point) * 0.5
            } else {
                line.point + line.dir * (other.dir.cross(line.point - other.point) / det)
            };
            let Some(dir) = (other.dir - line.dir).normalized() else {
                continue;
            };
            projected.push(Line { point, dir });
        }
        let previous = result;
        // Push as far as possible into line i's permitted side.
        result = solve_2d(&projected, radius, line.dir.perp(), true).unwrap_or(previous);
        worst = line.violation(result);
    }
    result
}
