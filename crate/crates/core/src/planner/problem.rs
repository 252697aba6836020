use crate::error::{Error, Result};
use crate::robot::{default_check_step, in_collision, Configuration, KinematicChain, SphereChainModel};
use crate::workspace::{OccupancyGrid, Scenario};

/// A scenario with its rasterized grid and robot model, ready for planning.
///
/// Immutable after construction; share it across threads by reference.
#[derive(Debug, Clone)]
pub struct Problem {
    pub scenario: Scenario,
    pub grid: OccupancyGrid,
    pub chain: KinematicChain,
    pub model: SphereChainModel,
    pub q_start: Configuration,
    pub q_goal: Configuration,
    /// Edge interpolation step in radians.
    pub check_step: f64,
}

impl Problem {
    /// Rasterizes the scenario and rejects start or goal states in collision.
    pub fn new(scenario: Scenario) -> Result<Self> {
        let grid = scenario.rasterize()?;
        Self::with_grid(scenario, grid)
    }

    pub fn with_grid(scenario: Scenario, grid: OccupancyGrid) -> Result<Self> {
        let chain = KinematicChain::from_spec(&scenario.robot)?;
        let model = SphereChainModel::from_spec(&chain, &scenario.robot)?;
        let q_start = Configuration(scenario.q_start.clone());
        let q_goal = Configuration(scenario.q_goal.clone());
        if !chain.within_limits(&q_start) {
            return Err(Error::OutOfLimits { which: "start" });
        }
        if !chain.within_limits(&q_goal) {
            return Err(Error::OutOfLimits { which: "goal" });
        }
        if in_collision(&chain, &model, &grid, &q_start) {
            return Err(Error::StartInCollision);
        }
        if in_collision(&chain, &model, &grid, &q_goal) {
            return Err(Error::GoalInCollision);
        }
        let check_step = default_check_step(&chain, &model, grid.cell_size());
        Ok(Problem {
            scenario,
            grid,
            chain,
            model,
            q_start,
            q_goal,
            check_step,
        })
    }

    pub fn dof(&self) -> usize {
        self.chain.dof()
    }

    pub fn name(&self) -> &str {
        &self.scenario.name
    }

    /// Copy with different start and goal, re-validated.
    pub fn with_endpoints(&self, q_start: Configuration, q_goal: Configuration) -> Result<Self> {
        let mut scenario = self.scenario.clone();
        scenario.q_start = q_start.0;
        scenario.q_goal = q_goal.0;
        Self::with_grid(scenario, self.grid.clone())
    }
}
