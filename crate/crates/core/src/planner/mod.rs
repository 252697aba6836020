//! Anytime repairing A* over the primitive lattice.
//!
//! The first pass runs with the initial inflation `epsilon_init` under the
//! `t_plan` budget. Each later pass lowers the inflation by `delta_epsilon`
//! (never below 1), moves INCONS into OPEN, clears CLOSED and improves the
//! solution again, until the suboptimality bound reaches 1 or the `t_repair`
//! budget, counted from the first solution, runs out.

mod problem;
mod search;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use problem::Problem;
pub use search::{
    compute_eps_prime, edge_cost, heuristic, reconstruct_path, ImproveOutcome, NodeKey, ReconstructedPath, SearchNode,
    SearchTree,
};

use crate::error::{Error, Result};
use crate::primitives::{Lattice, LatticeCoord, PrimitiveParams, Provenance, SuccessorContext, SuccessorSet};
use crate::robot::{Configuration, DEFAULT_CLEARANCE_CAP};

/// Default per-iteration decrement of the inflation factor.
pub const DEFAULT_DELTA_EPSILON: f64 = 0.5;

/// How nodes enter INCONS during a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InconsPolicy {
    /// A node whose cost improves while it is CLOSED goes to INCONS.
    #[default]
    Standard,
    /// Improved CLOSED nodes are dropped and every non-improving successor
    /// goes to INCONS (kept for comparison only; voids the bound).
    Literal,
}

/// Search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerParams {
    pub epsilon_init: f64,
    pub delta_epsilon: f64,
    #[serde(with = "secs")]
    pub t_plan: Duration,
    #[serde(with = "secs")]
    pub t_repair: Duration,
    pub primitives: PrimitiveParams,
    pub clearance_cap: f64,
    pub incons_policy: InconsPolicy,
}

mod secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let v = f64::deserialize(d)?;
        Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom)
    }
}

impl PlannerParams {
    /// Defaults by manipulator class: two joints or fewer use
    /// `epsilon = 10, t_plan = 5 s, t_repair = 1 s`; larger chains use
    /// `epsilon = 50, t_plan = 60 s, t_repair = 40 s`.
    pub fn for_dof(dof: usize, primitives: PrimitiveParams) -> Self {
        let (epsilon_init, plan, repair) = if dof <= 2 { (10.0, 5, 1) } else { (50.0, 60, 40) };
        PlannerParams {
            epsilon_init,
            delta_epsilon: DEFAULT_DELTA_EPSILON,
            t_plan: Duration::from_secs(plan),
            t_repair: Duration::from_secs(repair),
            primitives,
            clearance_cap: DEFAULT_CLEARANCE_CAP,
            incons_policy: InconsPolicy::Standard,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.primitives.validate()?;
        if !(self.epsilon_init >= 1.0 && self.epsilon_init.is_finite()) {
            return Err(Error::InvalidParameter("epsilon must be at least 1".into()));
        }
        if !(self.delta_epsilon > 0.0) {
            return Err(Error::InvalidParameter("delta epsilon must be positive".into()));
        }
        if self.t_plan.is_zero() || self.t_repair.is_zero() {
            return Err(Error::InvalidParameter("time budgets must be positive".into()));
        }
        if !(self.clearance_cap > 0.0) {
            return Err(Error::InvalidParameter("clearance cap must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome class of a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PlanStatus {
    SolvedOptimal,
    SolvedSuboptimal,
    TimeoutNoSolution,
}

impl PlanStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlanStatus::SolvedOptimal => "SOLVED_OPTIMAL",
            PlanStatus::SolvedSuboptimal => "SOLVED_SUBOPTIMAL",
            PlanStatus::TimeoutNoSolution => "TIMEOUT_NO_SOLUTION",
        }
    }
}

/// One completed improvement pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub epsilon: f64,
    pub eps_prime: f64,
    pub cost: f64,
    /// Cumulative expansions at the end of the pass.
    pub expansions: u64,
    #[serde(with = "secs")]
    pub elapsed: Duration,
}

/// Result of an ARA* query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub status: PlanStatus,
    /// Start to goal; empty without a solution.
    pub path: Vec<Configuration>,
    pub edges: Vec<(Provenance, f64)>,
    /// Sum of edge costs along `path`, radians; infinite without a solution.
    pub cost: f64,
    pub eps_prime_final: f64,
    pub iterations: Vec<IterationRecord>,
    /// Expansions of the first pass.
    pub n_init: u64,
    #[serde(with = "secs")]
    pub t_init: Duration,
    /// Cumulative expansions when the bound first reached 1.
    pub n_final: Option<u64>,
    #[serde(default, with = "opt_secs")]
    pub t_final: Option<Duration>,
    pub total_expansions: u64,
}

mod opt_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&d.as_secs_f64()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        let v = Option::<f64>::deserialize(d)?;
        v.map(|v| Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl PlanResult {
    pub fn is_solved(&self) -> bool {
        self.status != PlanStatus::TimeoutNoSolution
    }
}

/// Emitted once per expansion, after successor generation.
#[derive(Debug)]
pub struct ExpansionEvent<'a> {
    /// Pass number (1 for the first pass).
    pub iteration: u32,
    pub coord: &'a LatticeCoord,
    pub q: &'a Configuration,
    /// Clearance used to size bur spines; `None` in fixed mode.
    pub clearance: Option<f64>,
    /// Lattice successors followed by the goal-snap edge, if any.
    pub successors: &'a SuccessorSet,
}

/// Runs ARA* on `problem`.
pub fn ara_star(problem: &Problem, params: &PlannerParams) -> Result<PlanResult> {
    ara_star_observed(problem, params, &mut |_| {})
}

/// [`ara_star`] with a callback invoked on every expansion.
pub fn ara_star_observed(
    problem: &Problem,
    params: &PlannerParams,
    observer: &mut dyn FnMut(&ExpansionEvent<'_>),
) -> Result<PlanResult> {
    params.validate()?;
    if !problem.chain.within_limits(&problem.q_start) {
        return Err(Error::OutOfLimits { which: "start" });
    }
    if !problem.chain.within_limits(&problem.q_goal) {
        return Err(Error::OutOfLimits { which: "goal" });
    }

    let lattice = Lattice::new(problem.q_start.clone(), params.primitives.m_prim);
    let ctx = SuccessorContext {
        chain: &problem.chain,
        model: &problem.model,
        grid: &problem.grid,
        lattice: &lattice,
        params: &params.primitives,
        check_step: problem.check_step,
    };

    let clock = Instant::now();
    let mut epsilon = params.epsilon_init;
    let mut tree = SearchTree::new(
        ctx,
        problem.q_start.clone(),
        problem.q_goal.clone(),
        epsilon,
        params.clearance_cap,
        params.incons_policy,
    );

    let first = tree.improve_path(clock + params.t_plan, observer);
    let t_init = clock.elapsed();
    let n_init = tree.expansions();
    if !tree.g_goal().is_finite() {
        return Ok(PlanResult {
            status: PlanStatus::TimeoutNoSolution,
            path: Vec::new(),
            edges: Vec::new(),
            cost: f64::INFINITY,
            eps_prime_final: epsilon,
            iterations: Vec::new(),
            n_init,
            t_init,
            n_final: None,
            t_final: None,
            total_expansions: n_init,
        });
    }

    let mut eps_prime = pass_bound(&tree, first);
    let mut best = tree.goal_path()?;
    let mut iterations = vec![IterationRecord {
        epsilon,
        eps_prime,
        cost: best.cost(),
        expansions: n_init,
        elapsed: t_init,
    }];

    let repair_deadline = Instant::now() + params.t_repair;
    let mut timed_out = first == ImproveOutcome::TimedOut;
    while !timed_out && eps_prime > 1.0 && Instant::now() < repair_deadline {
        epsilon = (epsilon - params.delta_epsilon).max(1.0);
        tree.reopen(epsilon);
        let outcome = tree.improve_path(repair_deadline, observer);
        timed_out = outcome == ImproveOutcome::TimedOut;
        let path = tree.goal_path()?;
        // Bounds from earlier passes stay valid because the goal cost only
        // decreases.
        let bound = pass_bound(&tree, outcome).min(eps_prime);
        let improved = path.cost() < best.cost() || bound < eps_prime;
        eps_prime = bound;
        if path.cost() <= best.cost() {
            best = path;
        }
        if !timed_out || improved {
            iterations.push(IterationRecord {
                epsilon,
                eps_prime,
                cost: best.cost(),
                expansions: tree.expansions(),
                elapsed: clock.elapsed(),
            });
        }
    }

    let optimal = eps_prime <= 1.0;
    let last = iterations.last().expect("at least one iteration");
    let (n_final, t_final) = if optimal {
        (Some(last.expansions), Some(last.elapsed))
    } else {
        (None, None)
    };
    Ok(PlanResult {
        status: if optimal {
            PlanStatus::SolvedOptimal
        } else {
            PlanStatus::SolvedSuboptimal
        },
        cost: best.cost(),
        path: best.configurations,
        edges: best.edges,
        eps_prime_final: eps_prime,
        iterations,
        n_init,
        t_init,
        n_final,
        t_final,
        total_expansions: tree.expansions(),
    })
}

// Suboptimality bound after a pass. The inflation factor only bounds the
// solution of a pass that ran to completion; `g_goal / min(g + h)` holds at
// any point because OPEN ∪ INCONS always holds a node of an optimal path
// with its optimal cost.
fn pass_bound(tree: &SearchTree<'_>, outcome: ImproveOutcome) -> f64 {
    let cap = match outcome {
        ImproveOutcome::TimedOut => f64::INFINITY,
        ImproveOutcome::Converged | ImproveOutcome::Exhausted => tree.epsilon(),
    };
    compute_eps_prime(cap, tree.g_goal(), tree.frontier_min())
}
