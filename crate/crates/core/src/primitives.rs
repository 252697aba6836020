//! Successor generation over the joint-space lattice.
//!
//! Fixed primitives move one joint by `m_prim` in either direction and are
//! collision-checked by interpolation. Bur spines move one joint by the
//! largest multiple of `m_prim` that keeps every disc's displacement below
//! the measured clearance `d_c`; they need no collision check. When the
//! clearance falls under `d_crit` the whole expansion degrades to fixed
//! primitives, and any single spine shorter than `m_prim` falls back to a
//! checked fixed primitive in that direction. A spine that passes the goal's
//! value of its joint also yields the last lattice point before that value,
//! so burs can line up with the goal instead of overshooting it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::robot::{
    forward_kinematics, moment_arms, motion_collision_check, Configuration, KinematicChain, SphereChainModel,
};
use crate::workspace::OccupancyGrid;

/// Clearance threshold below which burs degrade to fixed primitives, meters.
pub const DEFAULT_D_CRIT: f64 = 0.03;

/// Successor generation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fixed,
    Bur,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fixed => "fixed",
            Mode::Bur => "bur",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fixed" => Ok(Mode::Fixed),
            "bur" | "burs" => Ok(Mode::Bur),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

/// Where an edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Bur,
    Fixed,
    GoalSnap,
}

/// Primitive length, degradation threshold and goal-snap gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveParams {
    /// Lattice step in radians.
    pub m_prim: f64,
    /// Clearance threshold in meters.
    pub d_crit: f64,
    pub mode: Mode,
    /// Max-norm gate (radians) for direct goal connection; infinite disables the gate.
    pub snap_radius: f64,
    /// In bur mode, also stop each spine that passes the goal's joint value
    /// at the last lattice point before it.
    #[serde(default = "yes")]
    pub goal_align: bool,
}

fn yes() -> bool {
    true
}

impl PrimitiveParams {
    /// Defaults: `d_crit = 0.03 m`, `snap_radius = 2 * m_prim`.
    pub fn new(m_prim: f64, mode: Mode) -> Self {
        PrimitiveParams {
            m_prim,
            d_crit: DEFAULT_D_CRIT,
            mode,
            snap_radius: 2.0 * m_prim,
            goal_align: true,
        }
    }

    pub fn from_degrees(m_prim_deg: f64, mode: Mode) -> Self {
        Self::new(m_prim_deg.to_radians(), mode)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m_prim > 0.0 && self.m_prim.is_finite()) {
            return Err(Error::InvalidParameter("m_prim must be positive".into()));
        }
        if !(self.d_crit > 0.0) {
            return Err(Error::InvalidParameter("d_crit must be positive".into()));
        }
        if !(self.snap_radius >= 0.0) {
            return Err(Error::InvalidParameter("snap_radius must be non-negative".into()));
        }
        Ok(())
    }
}

/// Integer lattice coordinate; state identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeCoord(pub Vec<i32>);

impl LatticeCoord {
    pub fn zeros(n: usize) -> Self {
        LatticeCoord(vec![0; n])
    }

    /// Copy with joint `joint` shifted by `steps`.
    pub fn shifted(&self, joint: usize, steps: i32) -> Self {
        let mut c = self.0.clone();
        c[joint] += steps;
        LatticeCoord(c)
    }
}

/// Lattice of configurations `origin + coord * m_prim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    origin: Configuration,
    m_prim: f64,
}

impl Lattice {
    pub fn new(origin: Configuration, m_prim: f64) -> Self {
        Lattice { origin, m_prim }
    }

    pub fn m_prim(&self) -> f64 {
        self.m_prim
    }

    pub fn origin(&self) -> &Configuration {
        &self.origin
    }

    pub fn config(&self, coord: &LatticeCoord) -> Configuration {
        Configuration(
            self.origin
                .iter()
                .zip(&coord.0)
                .map(|(o, &c)| o + c as f64 * self.m_prim)
                .collect(),
        )
    }

    /// The coordinate of `q` when it lies on the lattice (within 1e-9 steps).
    pub fn coord_of(&self, q: &[f64]) -> Option<LatticeCoord> {
        let mut coord = Vec::with_capacity(q.len());
        for (o, v) in self.origin.iter().zip(q) {
            let t = (v - o) / self.m_prim;
            let r = t.round();
            if (t - r).abs() > 1e-9 {
                return None;
            }
            coord.push(r as i32);
        }
        Some(LatticeCoord(coord))
    }
}

/// One generated successor.
#[derive(Debug, Clone, PartialEq)]
pub struct Successor {
    /// Lattice coordinate; `None` for a goal-snap edge to the exact goal.
    pub coord: Option<LatticeCoord>,
    pub q: Configuration,
    pub cost: f64,
    pub provenance: Provenance,
}

/// Expansion result.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuccessorSet {
    pub entries: Vec<Successor>,
}

impl SuccessorSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Successor> {
        self.entries.iter()
    }
}

impl<'a> IntoIterator for &'a SuccessorSet {
    type Item = &'a Successor;
    type IntoIter = std::slice::Iter<'a, Successor>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Largest single-joint rotation (radians) that moves no point of the distal
/// discs by `d_c` or more: `d_c / r_i`.
pub fn spine_length(d_c: f64, r_i: f64) -> f64 {
    debug_assert!(r_i > 0.0 && d_c >= 0.0);
    d_c / r_i
}

/// Number of whole primitives that fit in `raw`.
pub fn spine_steps(raw: f64, m_prim: f64) -> i64 {
    (raw / m_prim).floor() as i64
}

/// `raw` rounded down to a multiple of `m_prim` (possibly zero).
pub fn discretize_spine(raw: f64, m_prim: f64) -> f64 {
    spine_steps(raw, m_prim) as f64 * m_prim
}

/// Everything successor generation needs besides the expanded state.
#[derive(Debug, Clone, Copy)]
pub struct SuccessorContext<'a> {
    pub chain: &'a KinematicChain,
    pub model: &'a SphereChainModel,
    pub grid: &'a OccupancyGrid,
    pub lattice: &'a Lattice,
    pub params: &'a PrimitiveParams,
    /// Interpolation step for edge collision checks, radians.
    pub check_step: f64,
}

impl SuccessorContext<'_> {
    // Largest step count `<= want` in direction `dir` that stays inside the
    // limits of `joint`.
    fn clip_steps(&self, q: &[f64], joint: usize, dir: i32, want: i64) -> i64 {
        let (lo, hi) = self.chain.joint_limits()[joint];
        let room = if dir > 0 { hi - q[joint] } else { q[joint] - lo };
        let fit = ((room / self.lattice.m_prim()) + 1e-9).floor() as i64;
        want.min(fit).max(0)
    }

    fn fixed_entry(&self, q: &Configuration, coord: &LatticeCoord, joint: usize, dir: i32) -> Option<Successor> {
        if self.clip_steps(q, joint, dir, 1) < 1 {
            return None;
        }
        let next = coord.shifted(joint, dir);
        let q_next = self.lattice.config(&next);
        if !motion_collision_check(self.chain, self.model, self.grid, q, &q_next, self.check_step) {
            return None;
        }
        Some(Successor {
            coord: Some(next),
            q: q_next,
            cost: self.lattice.m_prim(),
            provenance: Provenance::Fixed,
        })
    }

    /// Up to `2n` fixed primitives at `±m_prim` per joint, in order
    /// `+1, -1, +2, -2, ...`; each within limits and collision-checked.
    pub fn fixed_successors(&self, q: &Configuration, coord: &LatticeCoord) -> SuccessorSet {
        let mut entries = Vec::with_capacity(2 * q.dof());
        for joint in 0..q.dof() {
            for dir in [1, -1] {
                entries.extend(self.fixed_entry(q, coord, joint, dir));
            }
        }
        SuccessorSet { entries }
    }

    /// Bur successors for a state with clearance `d_c`.
    pub fn bur_successors(&self, q: &Configuration, coord: &LatticeCoord, d_c: f64) -> SuccessorSet {
        if d_c < self.params.d_crit {
            return self.fixed_successors(q, coord);
        }
        let pose = forward_kinematics(self.chain, self.model, q).expect("configuration matches chain");
        let arms = moment_arms(&pose);
        let m = self.lattice.m_prim();
        let mut entries = Vec::with_capacity(2 * q.dof());
        for (joint, &r) in arms.iter().enumerate() {
            let steps = spine_steps(spine_length(d_c, r), m);
            for dir in [1, -1] {
                if steps >= 1 {
                    let s = self.clip_steps(q, joint, dir, steps);
                    if s >= 1 {
                        let next = coord.shifted(joint, dir * s as i32);
                        entries.push(Successor {
                            q: self.lattice.config(&next),
                            coord: Some(next),
                            cost: s as f64 * m,
                            provenance: Provenance::Bur,
                        });
                    }
                } else {
                    entries.extend(self.fixed_entry(q, coord, joint, dir));
                }
            }
        }
        SuccessorSet { entries }
    }

    /// [`bur_successors`](Self::bur_successors) plus, when `goal_align` is
    /// set, one extra point on every bur spine that passes the goal's value
    /// of its joint: the last lattice point before the goal coordinate. The
    /// extra point lies inside a safe spine, so it needs no check either.
    pub fn bur_successors_toward(
        &self,
        q: &Configuration,
        coord: &LatticeCoord,
        d_c: f64,
        q_goal: &Configuration,
    ) -> SuccessorSet {
        let mut set = self.bur_successors(q, coord, d_c);
        if !self.params.goal_align {
            return set;
        }
        let m = self.lattice.m_prim();
        let spines: Vec<(usize, i32)> = set
            .iter()
            .filter(|e| e.provenance == Provenance::Bur)
            .filter_map(|e| {
                let to = e.coord.as_ref()?;
                let joint = (0..to.0.len()).find(|&j| to.0[j] != coord.0[j])?;
                Some((joint, to.0[joint] - coord.0[joint]))
            })
            .collect();
        for (joint, delta) in spines {
            let offset = (q_goal[joint] - q[joint]) / m;
            if offset * delta as f64 <= 0.0 {
                continue;
            }
            let k = (offset.abs() + 1e-9).floor() as i32;
            if k >= 1 && k < delta.abs() {
                let next = coord.shifted(joint, delta.signum() * k);
                set.entries.push(Successor {
                    q: self.lattice.config(&next),
                    coord: Some(next),
                    cost: k as f64 * m,
                    provenance: Provenance::Bur,
                });
            }
        }
        set
    }

    /// Direct connection to `q_goal` when within the snap gate and the
    /// straight edge is collision-free.
    pub fn goal_snap(&self, q: &Configuration, q_goal: &Configuration) -> Option<Successor> {
        if q.distance_inf(q_goal) > self.params.snap_radius {
            return None;
        }
        if !motion_collision_check(self.chain, self.model, self.grid, q, q_goal, self.check_step) {
            return None;
        }
        Some(Successor {
            coord: None,
            q: q_goal.clone(),
            cost: q.distance(q_goal),
            provenance: Provenance::GoalSnap,
        })
    }
}
