//! Search-based motion planning for planar revolute manipulators.
//!
//! The planner runs anytime repairing A* (ARA*) over a joint-space lattice
//! anchored at the start configuration. Successors come either from fixed
//! single-joint motion primitives or from *burs*: single-joint spines whose
//! length is sized from the robot's minimum clearance so that the swept motion
//! is provably collision-free without an explicit edge check.
//!
//! The crate is organised bottom-up:
//!
//! * [`workspace`]: occupancy grid, scenario files and exact clearance queries.
//! * [`robot`]: kinematic chain, sphere collision model, clearance and moment arms.
//! * [`primitives`]: successor generation (fixed, bur, goal snap).
//! * [`planner`]: ARA* with the bur-aware path improvement loop.
//! * [`bench`]: benchmark sweeps, CSV tables and SVG renderings.
//! * [`cli`]: the `burplan` command-line front end.
//!
//! ```
//! use bur_planner::prelude::*;
//!
//! let scenario = Scenario::from_toml_str(r#"
//!     schema_version = 1
//!     name = "doc"
//!     tier = "EASY"
//!     start_deg = [0.0, 0.0]
//!     goal_deg = [40.0, -20.0]
//!     [workspace]
//!     min = [-1.0, -1.0]
//!     max = [1.0, 1.0]
//!     cell_size = 0.02
//!     [robot]
//!     link_lengths = [0.5, 0.4]
//!     sphere_radius = 0.05
//! "#).unwrap();
//! let problem = Problem::new(scenario).unwrap();
//! let params = PlannerParams::for_dof(2, PrimitiveParams::from_degrees(4.0, Mode::Fixed));
//! let result = ara_star(&problem, &params).unwrap();
//! assert!(result.is_solved());
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod error;
pub mod planner;
pub mod primitives;
pub mod robot;
pub mod workspace;

pub use error::{Error, Result};

/// Commonly used types.
pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::planner::{ara_star, PlanResult, PlanStatus, PlannerParams, Problem};
    pub use crate::primitives::{Mode, PrimitiveParams, Provenance};
    pub use crate::robot::{Configuration, KinematicChain, SphereChainModel};
    pub use crate::workspace::{OccupancyGrid, Scenario, Tier};
}
