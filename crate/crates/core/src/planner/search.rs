use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::primitives::{LatticeCoord, Mode, Provenance, SuccessorContext, SuccessorSet};
use crate::robot::{clearance_of_spheres, forward_kinematics, Configuration};

use super::{ExpansionEvent, InconsPolicy};

/// Euclidean joint-space distance to the goal.
pub fn heuristic(q: &[f64], q_goal: &[f64]) -> Result<f64> {
    edge_cost(q, q_goal)
}

/// Euclidean joint-space length of an edge.
pub fn edge_cost(q_a: &[f64], q_b: &[f64]) -> Result<f64> {
    if q_a.len() != q_b.len() {
        return Err(Error::DimensionMismatch {
            expected: q_a.len(),
            actual: q_b.len(),
        });
    }
    Ok(q_a.iter().zip(q_b).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// Suboptimality bound of the current solution:
/// `min(eps, g_goal / min_{OPEN ∪ INCONS}(g + h))`, never below 1.
///
/// `frontier_min` is `None` when OPEN and INCONS are both empty; a finite
/// goal cost is then optimal. An infinite goal cost yields `eps`.
pub fn compute_eps_prime(epsilon: f64, g_goal: f64, frontier_min: Option<f64>) -> f64 {
    if !g_goal.is_finite() {
        return epsilon;
    }
    match frontier_min {
        None => 1.0,
        Some(m) => epsilon.min(g_goal / m).max(1.0),
    }
}

/// State identity: a lattice point or the (possibly off-lattice) goal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKey {
    Lattice(LatticeCoord),
    Goal,
}

/// A visited search state.
#[derive(Debug, Clone)]
pub struct SearchNode {
    pub key: NodeKey,
    pub q: Configuration,
    pub g: f64,
    pub h: f64,
    /// Parent index, edge provenance and edge cost.
    pub parent: Option<(usize, Provenance, f64)>,
    closed_in: u32,
    in_open: bool,
    in_incons: bool,
}

#[derive(Debug)]
struct OpenEntry {
    f: f64,
    h: f64,
    g: f64,
    key: NodeKey,
    node: usize,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // Reversed so BinaryHeap pops the smallest (f, h, key).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.h.total_cmp(&self.h))
            .then_with(|| other.key.cmp(&self.key))
    }
}

/// Why an improvement pass stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImproveOutcome {
    /// `f(goal) <= min f(OPEN)`.
    Converged,
    /// OPEN ran empty.
    Exhausted,
    /// The deadline passed.
    TimedOut,
}

/// OPEN / CLOSED / INCONS bookkeeping over a growing set of nodes.
pub struct SearchTree<'a> {
    ctx: SuccessorContext<'a>,
    q_goal: Configuration,
    goal_coord: Option<LatticeCoord>,
    clearance_cap: f64,
    incons_policy: InconsPolicy,
    nodes: Vec<SearchNode>,
    index: HashMap<NodeKey, usize>,
    open: BinaryHeap<OpenEntry>,
    epsilon: f64,
    // CLOSED membership is `closed_in == iteration`, so clearing is O(1).
    iteration: u32,
    goal: usize,
    start: usize,
    expansions: u64,
}

impl<'a> SearchTree<'a> {
    pub fn new(
        ctx: SuccessorContext<'a>,
        q_start: Configuration,
        q_goal: Configuration,
        epsilon: f64,
        clearance_cap: f64,
        incons_policy: InconsPolicy,
    ) -> Self {
        let goal_coord = ctx.lattice.coord_of(&q_goal);
        let mut tree = SearchTree {
            ctx,
            q_goal: q_goal.clone(),
            goal_coord,
            clearance_cap,
            incons_policy,
            nodes: Vec::new(),
            index: HashMap::new(),
            open: BinaryHeap::new(),
            epsilon,
            iteration: 1,
            goal: 0,
            start: 0,
            expansions: 0,
        };
        let start_key = tree.key_for(Some(LatticeCoord::zeros(q_start.dof())));
        tree.goal = tree.node_for(NodeKey::Goal, &q_goal);
        tree.start = tree.node_for(start_key, &q_start);
        tree.nodes[tree.start].g = 0.0;
        tree.push_open(tree.start);
        tree
    }

    fn key_for(&self, coord: Option<LatticeCoord>) -> NodeKey {
        match coord {
            None => NodeKey::Goal,
            Some(c) if self.goal_coord.as_ref() == Some(&c) => NodeKey::Goal,
            Some(c) => NodeKey::Lattice(c),
        }
    }

    fn node_for(&mut self, key: NodeKey, q: &Configuration) -> usize {
        if let Some(&k) = self.index.get(&key) {
            return k;
        }
        let q = if key == NodeKey::Goal {
            self.q_goal.clone()
        } else {
            q.clone()
        };
        let h = q.distance(&self.q_goal);
        self.nodes.push(SearchNode {
            key: key.clone(),
            q,
            g: f64::INFINITY,
            h,
            parent: None,
            closed_in: 0,
            in_open: false,
            in_incons: false,
        });
        let k = self.nodes.len() - 1;
        self.index.insert(key, k);
        k
    }

    fn push_open(&mut self, k: usize) {
        let node = &mut self.nodes[k];
        node.in_open = true;
        self.open.push(OpenEntry {
            f: node.g + self.epsilon * node.h,
            h: node.h,
            g: node.g,
            key: node.key.clone(),
            node: k,
        });
    }

    fn is_closed(&self, k: usize) -> bool {
        self.nodes[k].closed_in == self.iteration
    }

    // Drops stale heap entries and returns the live minimum.
    fn peek_open(&mut self) -> Option<(f64, usize)> {
        while let Some(top) = self.open.peek() {
            let node = &self.nodes[top.node];
            if node.in_open && node.g == top.g && !self.is_closed(top.node) {
                return Some((top.f, top.node));
            }
            self.open.pop();
        }
        None
    }

    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    pub fn goal_index(&self) -> usize {
        self.goal
    }

    pub fn start_index(&self) -> usize {
        self.start
    }

    pub fn g_goal(&self) -> f64 {
        self.nodes[self.goal].g
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Minimum `g + h` over OPEN ∪ INCONS.
    pub fn frontier_min(&self) -> Option<f64> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(k, n)| (n.in_open && !self.is_closed(*k)) || n.in_incons)
            .map(|(_, n)| n.g + n.h)
            .min_by(|a, b| a.total_cmp(b))
    }

    pub fn eps_prime(&self) -> f64 {
        compute_eps_prime(self.epsilon, self.g_goal(), self.frontier_min())
    }

    /// Starts a new iteration with inflation `epsilon`: INCONS moves into
    /// OPEN, OPEN is re-keyed, CLOSED is cleared.
    pub fn reopen(&mut self, epsilon: f64) {
        self.epsilon = epsilon;
        self.iteration += 1;
        let members: Vec<usize> = (0..self.nodes.len())
            .filter(|&k| self.nodes[k].in_open || self.nodes[k].in_incons)
            .collect();
        self.open.clear();
        for k in members {
            self.nodes[k].in_incons = false;
            self.push_open(k);
        }
    }

    /// One improvement pass (expand until the goal's f is minimal, OPEN
    /// empties, or `deadline` passes).
    pub fn improve_path(&mut self, deadline: Instant, observer: &mut dyn FnMut(&ExpansionEvent<'_>)) -> ImproveOutcome {
        loop {
            let Some((min_f, k)) = self.peek_open() else {
                return ImproveOutcome::Exhausted;
            };
            if self.g_goal() <= min_f {
                return ImproveOutcome::Converged;
            }
            if Instant::now() >= deadline {
                return ImproveOutcome::TimedOut;
            }
            self.open.pop();
            self.nodes[k].in_open = false;
            self.nodes[k].closed_in = self.iteration;
            self.expansions += 1;
            self.expand(k, observer);
        }
    }

    fn expand(&mut self, k: usize, observer: &mut dyn FnMut(&ExpansionEvent<'_>)) {
        let q = self.nodes[k].q.clone();
        let NodeKey::Lattice(coord) = self.nodes[k].key.clone() else {
            // The goal is never below the termination threshold, so it is
            // never expanded.
            unreachable!("goal node expanded");
        };
        let (successors, d_c) = match self.ctx.params.mode {
            Mode::Fixed => (self.ctx.fixed_successors(&q, &coord), None),
            Mode::Bur => {
                let pose = forward_kinematics(self.ctx.chain, self.ctx.model, &q).expect("configuration matches chain");
                let d_c = clearance_of_spheres(self.ctx.grid, &pose.spheres, self.clearance_cap).d_c;
                (self.ctx.bur_successors_toward(&q, &coord, d_c, &self.q_goal), Some(d_c))
            }
        };
        let snap = self.ctx.goal_snap(&q, &self.q_goal);
        let mut all = successors;
        all.entries.extend(snap);
        observer(&ExpansionEvent {
            iteration: self.iteration,
            coord: &coord,
            q: &q,
            clearance: d_c,
            successors: &all,
        });
        self.relax(k, &all);
    }

    fn relax(&mut self, k: usize, successors: &SuccessorSet) {
        let g = self.nodes[k].g;
        for s in successors {
            let key = self.key_for(s.coord.clone());
            let child = self.node_for(key, &s.q);
            if child == k {
                continue;
            }
            let candidate = g + s.cost;
            if self.nodes[child].g > candidate {
                self.nodes[child].g = candidate;
                self.nodes[child].parent = Some((k, s.provenance, s.cost));
                if !self.is_closed(child) {
                    self.push_open(child);
                } else if self.incons_policy == InconsPolicy::Standard {
                    self.nodes[child].in_incons = true;
                }
            } else if self.incons_policy == InconsPolicy::Literal {
                self.nodes[child].in_incons = true;
            }
        }
    }

    /// Path to the goal following parent links.
    pub fn goal_path(&self) -> Result<ReconstructedPath> {
        reconstruct_path(&self.nodes, self.start, self.goal)
    }
}

/// Configurations from start to goal plus per-edge provenance and cost.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedPath {
    pub configurations: Vec<Configuration>,
    pub edges: Vec<(Provenance, f64)>,
}

impl ReconstructedPath {
    pub fn cost(&self) -> f64 {
        self.edges.iter().map(|(_, c)| c).sum()
    }
}

/// Follows parent links from `goal` back to `start` and reverses.
pub fn reconstruct_path(nodes: &[SearchNode], start: usize, goal: usize) -> Result<ReconstructedPath> {
    let mut configurations = vec![nodes[goal].q.clone()];
    let mut edges = Vec::new();
    let mut k = goal;
    while k != start {
        if edges.len() > nodes.len() {
            return Err(Error::BrokenParentChain);
        }
        let (parent, provenance, cost) = nodes[k].parent.ok_or(Error::BrokenParentChain)?;
        edges.push((provenance, cost));
        configurations.push(nodes[parent].q.clone());
        k = parent;
    }
    configurations.reverse();
    edges.reverse();
    Ok(ReconstructedPath { configurations, edges })
}
