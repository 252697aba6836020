use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{Obstacle, OccupancyGrid, Point};
use crate::error::{Error, Result};

/// Current scenario file schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Default grid resolution in meters.
pub const DEFAULT_CELL_SIZE: f64 = 0.01;

/// Default collision sphere radius in meters.
pub const DEFAULT_SPHERE_RADIUS: f64 = 0.05;

/// Difficulty tier of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tier {
    Easy,
    Medium,
    Hard,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Easy => "EASY",
            Tier::Medium => "MEDIUM",
            Tier::Hard => "HARD",
        })
    }
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "EASY" => Ok(Tier::Easy),
            "MEDIUM" => Ok(Tier::Medium),
            "HARD" => Ok(Tier::Hard),
            other => Err(Error::Parse(format!("unknown tier {other:?}"))),
        }
    }
}

// On-disk layout. Angles in degrees, lengths in meters.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: u32,
    name: String,
    tier: Tier,
    workspace: WorkspaceSection,
    #[serde(default)]
    obstacles: Vec<ObstacleEntry>,
    robot: RobotSection,
    start_deg: Vec<f64>,
    goal_deg: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceSection {
    min: [f64; 2],
    max: [f64; 2],
    cell_size: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ObstacleEntry {
    Rect { min: [f64; 2], max: [f64; 2] },
    Circle { center: [f64; 2], radius: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotSection {
    link_lengths: Vec<f64>,
    spheres_per_link: Option<usize>,
    sphere_radius: Option<f64>,
    base: Option<[f64; 2]>,
    joint_limits_deg: Option<Vec<[f64; 2]>>,
}

/// Workspace bounds and rasterization resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: Point,
    pub max: Point,
    pub cell_size: f64,
}

/// Robot geometry as declared in a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub base: Point,
    pub link_lengths: Vec<f64>,
    /// Explicit sphere count per link; `None` picks the smallest count with
    /// center spacing no larger than the radius.
    pub spheres_per_link: Option<usize>,
    pub sphere_radius: f64,
    /// Per-joint `[lo, hi]` in radians.
    pub joint_limits: Vec<(f64, f64)>,
}

impl RobotSpec {
    pub fn dof(&self) -> usize {
        self.link_lengths.len()
    }
}

/// A validated planning scenario. Angles are in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub tier: Tier,
    pub grid_spec: GridSpec,
    pub obstacles: Vec<Obstacle>,
    pub robot: RobotSpec,
    pub q_start: Vec<f64>,
    pub q_goal: Vec<f64>,
}

impl Scenario {
    /// Reads and validates a scenario file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Parses and validates scenario text. Collision of start and goal is
    /// checked later, once the grid has been rasterized.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: ScenarioFile) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let grid_spec = GridSpec {
            min: file.workspace.min.into(),
            max: file.workspace.max.into(),
            cell_size: file.workspace.cell_size.unwrap_or(DEFAULT_CELL_SIZE),
        };
        if !(grid_spec.cell_size > 0.0 && grid_spec.cell_size.is_finite()) {
            return Err(Error::Validation("workspace.cell_size must be positive".into()));
        }
        if !(grid_spec.max.x > grid_spec.min.x && grid_spec.max.y > grid_spec.min.y) {
            return Err(Error::Validation("workspace.max must exceed workspace.min".into()));
        }

        let obstacles = file
            .obstacles
            .into_iter()
            .enumerate()
            .map(|(k, o)| convert_obstacle(k, o, &grid_spec))
            .collect::<Result<Vec<_>>>()?;

        let robot = &file.robot;
        let n = robot.link_lengths.len();
        if n == 0 {
            return Err(Error::Validation("robot.link_lengths must not be empty".into()));
        }
        if let Some(k) = robot.link_lengths.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Validation(format!("robot.link_lengths[{k}] must be positive")));
        }
        let sphere_radius = robot.sphere_radius.unwrap_or(DEFAULT_SPHERE_RADIUS);
        if !(sphere_radius > 0.0 && sphere_radius.is_finite()) {
            return Err(Error::Validation("robot.sphere_radius must be positive".into()));
        }
        if robot.spheres_per_link == Some(0) {
            return Err(Error::Validation("robot.spheres_per_link must be at least 1".into()));
        }
        let joint_limits = match &robot.joint_limits_deg {
            None => vec![(-std::f64::consts::PI, std::f64::consts::PI); n],
            Some(limits) => {
                if limits.len() != n {
                    return Err(Error::Validation(format!(
                        "robot.joint_limits_deg has {} entries for {n} joints",
                        limits.len()
                    )));
                }
                let limits: Vec<_> = limits
                    .iter()
                    .map(|[lo, hi]| (lo.to_radians(), hi.to_radians()))
                    .collect();
                if let Some(k) = limits.iter().position(|(lo, hi)| !(lo < hi)) {
                    return Err(Error::Validation(format!("joint {} has lo >= hi", k + 1)));
                }
                limits
            }
        };

        for (label, q) in [("start_deg", &file.start_deg), ("goal_deg", &file.goal_deg)] {
            if q.len() != n {
                return Err(Error::Validation(format!(
                    "{label} has {} angles but the robot has {n} links",
                    q.len()
                )));
            }
        }
        let q_start: Vec<f64> = file.start_deg.iter().map(|d| d.to_radians()).collect();
        let q_goal: Vec<f64> = file.goal_deg.iter().map(|d| d.to_radians()).collect();
        for (which, q) in [("start", &q_start), ("goal", &q_goal)] {
            let inside = q
                .iter()
                .zip(&joint_limits)
                .all(|(&v, &(lo, hi))| v >= lo - 1e-9 && v <= hi + 1e-9);
            if !inside {
                return Err(Error::OutOfLimits { which });
            }
        }

        Ok(Scenario {
            name: file.name,
            tier: file.tier,
            grid_spec,
            obstacles,
            robot: RobotSpec {
                base: robot.base.map(Point::from).unwrap_or_default(),
                link_lengths: robot.link_lengths.clone(),
                spheres_per_link: robot.spheres_per_link,
                sphere_radius,
                joint_limits,
            },
            q_start,
            q_goal,
        })
    }

    pub fn dof(&self) -> usize {
        self.robot.dof()
    }

    /// Rasterizes the obstacles onto the scenario's grid.
    pub fn rasterize(&self) -> Result<OccupancyGrid> {
        OccupancyGrid::rasterize(
            self.grid_spec.min,
            self.grid_spec.max,
            self.grid_spec.cell_size,
            &self.obstacles,
        )
    }
}

fn convert_obstacle(index: usize, entry: ObstacleEntry, spec: &GridSpec) -> Result<Obstacle> {
    let obstacle = match entry {
        ObstacleEntry::Rect { min, max } => {
            if !(min[0] <= max[0] && min[1] <= max[1]) {
                return Err(Error::Validation(format!("obstacle {index}: rect min exceeds max")));
            }
            Obstacle::Rect {
                min: min.into(),
                max: max.into(),
            }
        }
        ObstacleEntry::Circle { center, radius } => {
            if !(radius >= 0.0 && radius.is_finite()) {
                return Err(Error::Validation(format!("obstacle {index}: negative radius")));
            }
            Obstacle::Circle {
                center: center.into(),
                radius,
            }
        }
    };
    let (lo, hi) = obstacle.bounds();
    let disjoint = hi.x < spec.min.x || lo.x > spec.max.x || hi.y < spec.min.y || lo.y > spec.max.y;
    if disjoint {
        return Err(Error::Validation(format!(
            "obstacle {index} lies entirely outside the workspace"
        )));
    }
    Ok(obstacle)
}
