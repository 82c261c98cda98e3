use std::fmt::Write as _;

use super::run::TrajectoryLog;
use super::scenario::Scenario;
use crate::geom::Vec2;

pub const CSV_HEADER: &str = "iteration,swarm_id,agent_id,x,y,vx,vy,min_separation,swarm_cost";

/// Nine significant digits, shortest form, `%g` style.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One row per (iteration, agent), with a header.
pub fn export_csv(log: &TrajectoryLog) -> String {
    let mut out = String::with_capacity(64 * log.records.len() * log.agents.len().max(1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &log.records {
        for (k, a) in log.agents.iter().enumerate() {
            let p = r.positions[k];
            let v = r.velocities[k];
            let cost = r.swarm_costs.get(a.swarm_id).copied().unwrap_or(f64::NAN);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.iteration,
                a.swarm_id,
                a.id,
                format_sig9(p.x),
                format_sig9(p.y),
                format_sig9(v.x),
                format_sig9(v.y),
                format_sig9(r.min_separation),
                format_sig9(cost),
            )
            .expect("writing to a String");
        }
    }
    out
}

const SWARM_COLORS: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const PX_PER_UNIT: f64 = 60.0;
const MARGIN: f64 = 0.5;

/// Static SVG: arena outline, one trajectory polyline per agent (omitted for
/// a run with no steps) and a disc of the agent's radius at its last
/// position.
pub fn render_svg(log: &TrajectoryLog, s: &Scenario) -> String {
    let verts = &s.arena.vertices;
    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for v in verts.iter().chain(log.records.iter().flat_map(|r| r.positions.iter())) {
        lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    lo -= Vec2::new(MARGIN, MARGIN);
    hi += Vec2::new(MARGIN, MARGIN);
    let width = (hi.x - lo.x) * PX_PER_UNIT;
    let height = (hi.y - lo.y) * PX_PER_UNIT;
    // y grows upward in the world and downward in SVG.
    let map = |p: Vec2| ((p.x - lo.x) * PX_PER_UNIT, (hi.y - p.y) * PX_PER_UNIT);
    let color = |swarm: usize| SWARM_COLORS[swarm % SWARM_COLORS.len()];

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(out, "<title>{} iterations, {:?}</title>", log.iterations(), log.termination);

    let arena_pts: Vec<String> = verts
        .iter()
        .map(|&v| {
            let (x, y) = map(v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(out, r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#, arena_pts.join(" "));

    if log.records.len() > 1 {
        for (k, a) in log.agents.iter().enumerate() {
            let pts: Vec<String> = log
                .records
                .iter()
                .map(|r| {
                    let (x, y) = map(r.positions[k]);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-opacity="0.8"/>"#,
                pts.join(" "),
                color(a.swarm_id)
            );
        }
    }

    if let Some(last) = log.records.last() {
        for (k, a) in log.agents.iter().enumerate() {
            let (x, y) = map(last.positions[k]);
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="{}" fill-opacity="0.6" stroke="{}"/>"#,
                a.radius * PX_PER_UNIT,
                color(a.swarm_id),
                color(a.swarm_id)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
