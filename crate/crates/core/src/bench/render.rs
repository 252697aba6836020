//! Deterministic SVG views of the workspace and of a 2-DoF C-space.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::{ExpansionEvent, Problem};
use crate::primitives::Provenance;
use crate::robot::{in_collision, Configuration};
use crate::workspace::{Obstacle, Point};

const WORKSPACE_PX_PER_M: f64 = 300.0;
const CSPACE_PX: f64 = 720.0;
const OBSTACLE_FILL: &str = "#f4a6c8";

/// Successor edge of a logged expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionEdge {
    pub q: Configuration,
    pub cost: f64,
    pub provenance: Provenance,
}

/// One logged expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub iteration: u32,
    pub q: Configuration,
    pub clearance: Option<f64>,
    pub successors: Vec<ExpansionEdge>,
}

impl ExpansionRecord {
    pub fn from_event(event: &ExpansionEvent<'_>) -> Self {
        ExpansionRecord {
            iteration: event.iteration,
            q: event.q.clone(),
            clearance: event.clearance,
            successors: event
                .successors
                .iter()
                .map(|s| ExpansionEdge {
                    q: s.q.clone(),
                    cost: s.cost,
                    provenance: s.provenance,
                })
                .collect(),
        }
    }
}

fn edge_color(p: Provenance) -> &'static str {
    match p {
        Provenance::Bur => "#1f5fbf",
        Provenance::Fixed => "#e07b00",
        Provenance::GoalSnap => "#2a9d3a",
    }
}

/// Workspace view: obstacles, the robot at every configuration of `path`
/// and the end-effector trace.
pub fn render_workspace(problem: &Problem, path: &[Configuration]) -> Result<String> {
    let spec = &problem.scenario.grid_spec;
    let s = WORKSPACE_PX_PER_M;
    let w = (spec.max.x - spec.min.x) * s;
    let h = (spec.max.y - spec.min.y) * s;
    let tx = |p: Point| ((p.x - spec.min.x) * s, (spec.max.y - p.y) * s);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white" stroke="black"/>"#
    );
    for o in &problem.scenario.obstacles {
        match *o {
            Obstacle::Rect { min, max } => {
                let (x0, y0) = tx(Point::new(min.x, max.y));
                let _ = writeln!(
                    out,
                    r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{OBSTACLE_FILL}"/>"#,
                    (max.x - min.x) * s,
                    (max.y - min.y) * s
                );
            }
            Obstacle::Circle { center, radius } => {
                let (cx, cy) = tx(center);
                let _ = writeln!(
                    out,
                    r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="{OBSTACLE_FILL}"/>"#,
                    radius * s
                );
            }
        }
    }

    let mut trace = Vec::with_capacity(path.len());
    let last = path.len().saturating_sub(1);
    for (k, q) in path.iter().enumerate() {
        let joints = problem.chain.joint_positions(q)?;
        let color = if k == 0 {
            "#2a9d3a"
        } else if k == last {
            "#c0392b"
        } else {
            "#888888"
        };
        let pts: Vec<String> = joints
            .iter()
            .map(|&p| {
                let (x, y) = tx(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        trace.push(tx(*joints.last().expect("chain has joints")));
    }
    if trace.len() > 1 {
        let pts: Vec<String> = trace.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-dasharray="4 2"/>"#,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Brute-force C-space obstacle map of a 2-DoF problem, sampled at cell
/// centers over the joint limits.
#[derive(Debug, Clone, PartialEq)]
pub struct CspaceRaster {
    pub cols: usize,
    pub rows: usize,
    pub limits: [(f64, f64); 2],
    /// Row-major, row 0 at the lower `q2` limit.
    pub blocked: Vec<bool>,
}

impl CspaceRaster {
    pub fn is_blocked(&self, col: usize, row: usize) -> bool {
        self.blocked[row * self.cols + col]
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|&&b| b).count()
    }

    fn cell_width(&self, axis: usize) -> f64 {
        let (lo, hi) = self.limits[axis];
        (hi - lo) / if axis == 0 { self.cols } else { self.rows } as f64
    }

    /// Configuration at the center of a cell.
    pub fn center(&self, col: usize, row: usize) -> Configuration {
        Configuration::new(vec![
            self.limits[0].0 + (col as f64 + 0.5) * self.cell_width(0),
            self.limits[1].0 + (row as f64 + 0.5) * self.cell_width(1),
        ])
    }
}

fn require_2dof(problem: &Problem) -> Result<()> {
    if problem.dof() != 2 {
        return Err(Error::Unsupported(format!(
            "C-space rendering needs a 2-DoF robot, got {} joints",
            problem.dof()
        )));
    }
    Ok(())
}

/// Samples the C-space obstacle region at `resolution_deg` spacing.
pub fn cspace_obstacle_raster(problem: &Problem, resolution_deg: f64) -> Result<CspaceRaster> {
    require_2dof(problem)?;
    if !(resolution_deg > 0.0 && resolution_deg.is_finite()) {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let res = resolution_deg.to_radians();
    let limits = [problem.chain.joint_limits()[0], problem.chain.joint_limits()[1]];
    let count = |(lo, hi): (f64, f64)| (((hi - lo) / res).ceil() as usize).max(1);
    let (cols, rows) = (count(limits[0]), count(limits[1]));
    let mut raster = CspaceRaster {
        cols,
        rows,
        limits,
        blocked: vec![false; cols * rows],
    };
    for row in 0..rows {
        for col in 0..cols {
            let q = raster.center(col, row);
            raster.blocked[row * cols + col] = in_collision(&problem.chain, &problem.model, &problem.grid, &q);
        }
    }
    Ok(raster)
}

/// C-space view: obstacle region in pink, expanded states as dots and
/// successor edges colored by provenance (bur blue, fixed orange, goal snap
/// green). Axes are joint angles over the joint limits.
pub fn render_cspace(problem: &Problem, expansions: &[ExpansionRecord], resolution_deg: f64) -> Result<String> {
    let raster = cspace_obstacle_raster(problem, resolution_deg)?;
    let [(lo1, hi1), (lo2, hi2)] = raster.limits;
    let px = CSPACE_PX;
    let tx = |q: &[f64]| ((q[0] - lo1) / (hi1 - lo1) * px, (hi2 - q[1]) / (hi2 - lo2) * px);
    let cw = px / raster.cols as f64;
    let ch = px / raster.rows as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px:.0}" height="{px:.0}" viewBox="0 0 {px:.3} {px:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{px:.3}" height="{px:.3}" fill="white" stroke="black"/>"#
    );
    // Horizontal runs of blocked cells, one rect each.
    for row in 0..raster.rows {
        let y = px - (row as f64 + 1.0) * ch;
        let mut col = 0;
        while col < raster.cols {
            if !raster.is_blocked(col, row) {
                col += 1;
                continue;
            }
            let start = col;
            while col < raster.cols && raster.is_blocked(col, row) {
                col += 1;
            }
            let _ = writeln!(
                out,
                r#"<rect class="cobs" x="{:.3}" y="{y:.3}" width="{:.3}" height="{ch:.3}" fill="{OBSTACLE_FILL}"/>"#,
                start as f64 * cw,
                (col - start) as f64 * cw
            );
        }
    }
    for e in expansions {
        if e.q.dof() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: e.q.dof(),
            });
        }
        let (x0, y0) = tx(&e.q);
        for s in &e.successors {
            let (x1, y1) = tx(&s.q);
            let _ = writeln!(
                out,
                r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="{}" stroke-width="1"/>"#,
                edge_color(s.provenance)
            );
        }
    }
    for e in expansions {
        let (x, y) = tx(&e.q);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5" fill="black"/>"#);
    }
    for (q, color) in [(&problem.q_start, "#2a9d3a"), (&problem.q_goal, "#c0392b")] {
        let (x, y) = tx(q);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="{color}"/>"#);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
