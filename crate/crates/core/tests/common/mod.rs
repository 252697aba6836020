//! Independent oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::path::PathBuf;

use bur_planner::planner::Problem;
use bur_planner::primitives::{Lattice, LatticeCoord, PrimitiveParams};
use bur_planner::robot::{
    forward_kinematics, in_collision, moment_arms, motion_collision_check, Configuration, KinematicChain, Sphere,
    SphereChainModel,
};
use bur_planner::workspace::{point_box_distance, OccupancyGrid, Scenario};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const SHIPPED: [&str; 6] = [
    "2dof_easy",
    "2dof_medium",
    "2dof_hard",
    "7dof_easy",
    "7dof_medium",
    "7dof_hard",
];

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.toml"))
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn shipped(name: &str) -> Problem {
    Problem::new(Scenario::load(scenario_path(name)).unwrap()).unwrap()
}

/// Exhaustive sphere x occupied-cell minimum, clamped at zero. Infinite on
/// an empty grid.
pub fn brute_clearance(grid: &OccupancyGrid, spheres: &[Sphere]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, j) in grid.occupied_cells() {
        let (lo, hi) = grid.cell_box(i, j);
        for s in spheres {
            best = best.min(point_box_distance(s.center, lo, hi) - s.radius);
        }
    }
    best.max(0.0)
}

/// Dense re-check of a straight joint-space motion at a spacing of a quarter
/// of `cell_size / max r_i`. Returns the first colliding sample, if any.
pub fn dense_violation(problem: &Problem, from: &Configuration, to: &Configuration) -> Option<Configuration> {
    dense_violation_in(&problem.chain, &problem.model, &problem.grid, from, to)
}

pub fn dense_violation_in(
    chain: &KinematicChain,
    model: &SphereChainModel,
    grid: &OccupancyGrid,
    from: &Configuration,
    to: &Configuration,
) -> Option<Configuration> {
    let pose = forward_kinematics(chain, model, from).unwrap();
    let r_max = moment_arms(&pose).into_iter().fold(0.0, f64::max);
    let step = grid.cell_size() / r_max / 4.0;
    let span = from.distance_inf(to);
    let n = (span / step).ceil().max(1.0) as usize;
    (0..=n)
        .map(|k| from.lerp(to, k as f64 / n as f64))
        .find(|q| in_collision(chain, model, grid, q))
}

#[derive(PartialEq)]
struct Entry(f64, Vec<i32>);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Optimal cost over the full fixed-primitive lattice anchored at the start,
/// including direct goal connections from every state inside the snap gate.
/// Written independently of the planner: plain Dijkstra over coordinates.
pub fn dijkstra_cost(problem: &Problem, prim: &PrimitiveParams) -> f64 {
    let lattice = Lattice::new(problem.q_start.clone(), prim.m_prim);
    let goal_coord = lattice.coord_of(&problem.q_goal);
    let n = problem.dof();
    let mut dist: HashMap<Vec<i32>, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(vec![0; n], 0.0);
    heap.push(Entry(0.0, vec![0; n]));
    let mut best = f64::INFINITY;
    while let Some(Entry(d, c)) = heap.pop() {
        if d > dist[&c] || d >= best {
            continue;
        }
        let q = lattice.config(&LatticeCoord(c.clone()));
        if goal_coord.as_ref().is_some_and(|g| g.0 == c) {
            best = best.min(d);
        }
        if q.distance_inf(&problem.q_goal) <= prim.snap_radius
            && motion_collision_check(
                &problem.chain,
                &problem.model,
                &problem.grid,
                &q,
                &problem.q_goal,
                problem.check_step,
            )
        {
            best = best.min(d + q.distance(&problem.q_goal));
        }
        for j in 0..n {
            for dir in [1, -1] {
                let mut next = c.clone();
                next[j] += dir;
                let qn = lattice.config(&LatticeCoord(next.clone()));
                if !problem.chain.within_limits(&qn) {
                    continue;
                }
                if !motion_collision_check(
                    &problem.chain,
                    &problem.model,
                    &problem.grid,
                    &q,
                    &qn,
                    problem.check_step,
                ) {
                    continue;
                }
                let nd = d + prim.m_prim;
                if dist.get(&next).is_none_or(|&old| nd < old) {
                    dist.insert(next.clone(), nd);
                    heap.push(Entry(nd, next));
                }
            }
        }
    }
    best
}

fn obstacle_toml(rng: &mut StdRng) -> String {
    // Keep obstacles beyond the first link so they form islands in C-space.
    let r = rng.gen_range(0.6..0.95);
    let a: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let (x, y) = (r * a.cos(), r * a.sin());
    if rng.gen_bool(0.5) {
        let s = rng.gen_range(0.03..0.08);
        format!("[[obstacles]]\ntype = \"circle\"\ncenter = [{x}, {y}]\nradius = {s}\n")
    } else {
        let (w, h) = (rng.gen_range(0.04..0.15), rng.gen_range(0.04..0.15));
        format!(
            "[[obstacles]]\ntype = \"rect\"\nmin = [{}, {}]\nmax = [{}, {}]\n",
            x - w / 2.0,
            y - h / 2.0,
            x + w / 2.0,
            y + h / 2.0
        )
    }
}

/// A random 2-DoF scenario on a 0.02 m grid with 2 to 5 obstacles. Start
/// angles are whole degrees; the goal is off-lattice. `None` when the drawn
/// start or goal is in collision.
pub fn random_small_scenario(seed: u64) -> Option<Problem> {
    let mut rng = StdRng::seed_from_u64(seed);
    let start = [rng.gen_range(-170..=170) as f64, rng.gen_range(-150..=150) as f64];
    let goal = [rng.gen_range(-170.0..170.0), rng.gen_range(-150.0..150.0)];
    let mut text = format!(
        "schema_version = 1\nname = \"small_{seed}\"\ntier = \"EASY\"\n\
         start_deg = [{}, {}]\ngoal_deg = [{}, {}]\n\
         [workspace]\nmin = [-1.0, -1.0]\nmax = [1.0, 1.0]\ncell_size = 0.02\n\
         [robot]\nlink_lengths = [0.5, 0.4]\nsphere_radius = 0.05\n",
        start[0], start[1], goal[0], goal[1]
    );
    for _ in 0..rng.gen_range(2..=5) {
        text.push_str(&obstacle_toml(&mut rng));
    }
    Problem::new(Scenario::from_toml_str(&text).ok()?).ok()
}

/// The first `count` random small scenarios whose goal is reachable in the
/// 4 degree lattice, with their Dijkstra costs.
pub fn small_solvable_scenarios(count: usize) -> Vec<(Problem, f64)> {
    let prim = PrimitiveParams::from_degrees(4.0, bur_planner::primitives::Mode::Fixed);
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < count {
        if let Some(p) = random_small_scenario(seed) {
            let c = dijkstra_cost(&p, &prim);
            if c.is_finite() {
                out.push((p, c));
            }
        }
        seed += 1;
    }
    out
}
