//! Planar workspace model: occupancy grid, scenario files and clearance queries.

mod grid;
mod scenario;

pub use grid::{point_box_distance, Obstacle, OccupancyGrid, Point};
pub use scenario::{GridSpec, RobotSpec, Scenario, Tier, DEFAULT_CELL_SIZE, DEFAULT_SPHERE_RADIUS, SCHEMA_VERSION};
