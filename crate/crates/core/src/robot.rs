//! Planar revolute chain, its sphere collision model, and the clearance
//! quantities that size bur spines.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::workspace::{OccupancyGrid, Point, RobotSpec};

/// Default clearance reported on an obstacle-free grid, in meters.
pub const DEFAULT_CLEARANCE_CAP: f64 = 1.0;

/// Joint angles in radians, one per joint, each relative to the previous link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<f64>);

impl Configuration {
    pub fn new(q: Vec<f64>) -> Self {
        Configuration(q)
    }

    pub fn from_degrees(deg: &[f64]) -> Self {
        Configuration(deg.iter().map(|d| d.to_radians()).collect())
    }

    pub fn to_degrees(&self) -> Vec<f64> {
        self.0.iter().map(|r| r.to_degrees()).collect()
    }

    pub fn dof(&self) -> usize {
        self.0.len()
    }

    /// Euclidean joint-space distance.
    pub fn distance(&self, other: &Configuration) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest per-joint difference.
    pub fn distance_inf(&self, other: &Configuration) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Linear interpolation `self + t * (other - self)`.
    pub fn lerp(&self, other: &Configuration, t: f64) -> Configuration {
        Configuration(self.0.iter().zip(&other.0).map(|(a, b)| a + t * (b - a)).collect())
    }
}

impl Deref for Configuration {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Configuration {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(q: Vec<f64>) -> Self {
        Configuration(q)
    }
}

/// Serial chain of revolute joints in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicChain {
    base: Point,
    link_lengths: Vec<f64>,
    joint_limits: Vec<(f64, f64)>,
}

impl KinematicChain {
    /// A chain with default joint limits of `[-pi, pi]` on every joint.
    pub fn new(base: Point, link_lengths: Vec<f64>) -> Result<Self> {
        let n = link_lengths.len();
        Self::with_limits(
            base,
            link_lengths,
            vec![(-std::f64::consts::PI, std::f64::consts::PI); n],
        )
    }

    pub fn with_limits(base: Point, link_lengths: Vec<f64>, joint_limits: Vec<(f64, f64)>) -> Result<Self> {
        if link_lengths.is_empty() {
            return Err(Error::Validation("chain needs at least one link".into()));
        }
        if link_lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Validation("link lengths must be positive".into()));
        }
        if joint_limits.len() != link_lengths.len() {
            return Err(Error::DimensionMismatch {
                expected: link_lengths.len(),
                actual: joint_limits.len(),
            });
        }
        if joint_limits.iter().any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::Validation("joint limits need lo < hi".into()));
        }
        Ok(KinematicChain {
            base,
            link_lengths,
            joint_limits,
        })
    }

    pub fn from_spec(spec: &RobotSpec) -> Result<Self> {
        Self::with_limits(spec.base, spec.link_lengths.clone(), spec.joint_limits.clone())
    }

    pub fn dof(&self) -> usize {
        self.link_lengths.len()
    }

    pub fn base(&self) -> Point {
        self.base
    }

    pub fn link_lengths(&self) -> &[f64] {
        &self.link_lengths
    }

    pub fn joint_limits(&self) -> &[(f64, f64)] {
        &self.joint_limits
    }

    pub fn total_length(&self) -> f64 {
        self.link_lengths.iter().sum()
    }

    /// Whether every joint is inside its limits, allowing 1e-9 rad of round-off.
    pub fn within_limits(&self, q: &[f64]) -> bool {
        q.len() == self.dof()
            && q.iter()
                .zip(&self.joint_limits)
                .all(|(&v, &(lo, hi))| v >= lo - 1e-9 && v <= hi + 1e-9)
    }

    fn check_dim(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.dof() {
            return Err(Error::DimensionMismatch {
                expected: self.dof(),
                actual: q.len(),
            });
        }
        Ok(())
    }

    /// Joint positions `p_0 = base, ..., p_n = end effector`.
    pub fn joint_positions(&self, q: &[f64]) -> Result<Vec<Point>> {
        self.check_dim(q)?;
        Ok(self.joint_positions_unchecked(q))
    }

    fn joint_positions_unchecked(&self, q: &[f64]) -> Vec<Point> {
        let mut out = Vec::with_capacity(q.len() + 1);
        let mut p = self.base;
        let mut heading = 0.0;
        out.push(p);
        for (&len, &angle) in self.link_lengths.iter().zip(q) {
            heading += angle;
            p = Point::new(p.x + len * heading.cos(), p.y + len * heading.sin());
            out.push(p);
        }
        out
    }
}

/// One collision disc. `link` is 0 for the base disc and `i` for link `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
    pub link: usize,
}

/// Equal-radius discs at evenly spaced fractions `k/m, k = 1..=m` along each
/// link, plus one disc on the base so the first link is covered from its pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereChainModel {
    spheres_per_link: Vec<usize>,
    radius: f64,
}

impl SphereChainModel {
    /// `counts[i]` discs on link `i + 1`. No coverage check is made; see
    /// [`check_coverage`](Self::check_coverage).
    pub fn new(counts: Vec<usize>, radius: f64) -> Result<Self> {
        if counts.contains(&0) {
            return Err(Error::Validation("every link needs at least one sphere".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Validation("sphere radius must be positive".into()));
        }
        Ok(SphereChainModel {
            spheres_per_link: counts,
            radius,
        })
    }

    /// Smallest per-link counts with center spacing no larger than `radius`.
    pub fn covering(chain: &KinematicChain, radius: f64) -> Result<Self> {
        let counts = chain
            .link_lengths()
            .iter()
            .map(|&l| ((l / radius) - 1e-9).ceil().max(1.0) as usize)
            .collect();
        Self::new(counts, radius)
    }

    pub fn from_spec(chain: &KinematicChain, spec: &RobotSpec) -> Result<Self> {
        let model = match spec.spheres_per_link {
            Some(k) => Self::new(vec![k; chain.dof()], spec.sphere_radius)?,
            None => Self::covering(chain, spec.sphere_radius)?,
        };
        model.check_coverage(chain)?;
        Ok(model)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn spheres_per_link(&self) -> &[usize] {
        &self.spheres_per_link
    }

    pub fn sphere_count(&self) -> usize {
        1 + self.spheres_per_link.iter().sum::<usize>()
    }

    /// Consecutive disc centers (including the joint pivots) must be at most
    /// two radii apart so the discs cover every link segment.
    pub fn check_coverage(&self, chain: &KinematicChain) -> Result<()> {
        if self.spheres_per_link.len() != chain.dof() {
            return Err(Error::DimensionMismatch {
                expected: chain.dof(),
                actual: self.spheres_per_link.len(),
            });
        }
        for (i, (&len, &k)) in chain.link_lengths().iter().zip(&self.spheres_per_link).enumerate() {
            let spacing = len / k as f64;
            if spacing > 2.0 * self.radius + 1e-12 {
                return Err(Error::Validation(format!(
                    "link {}: sphere spacing {spacing:.4} m exceeds twice the radius {:.4} m",
                    i + 1,
                    self.radius
                )));
            }
        }
        Ok(())
    }
}

/// Forward kinematics result: joint pivots and every collision disc.
#[derive(Debug, Clone)]
pub struct Pose {
    pub joints: Vec<Point>,
    pub spheres: Vec<Sphere>,
}

impl Pose {
    pub fn end_effector(&self) -> Point {
        *self.joints.last().expect("chain has at least one link")
    }
}

/// Joint positions and sphere centers for `q`.
pub fn forward_kinematics(chain: &KinematicChain, model: &SphereChainModel, q: &[f64]) -> Result<Pose> {
    chain.check_dim(q)?;
    if model.spheres_per_link.len() != chain.dof() {
        return Err(Error::DimensionMismatch {
            expected: chain.dof(),
            actual: model.spheres_per_link.len(),
        });
    }
    Ok(pose_unchecked(chain, model, q))
}

fn pose_unchecked(chain: &KinematicChain, model: &SphereChainModel, q: &[f64]) -> Pose {
    let joints = chain.joint_positions_unchecked(q);
    let mut spheres = Vec::with_capacity(model.sphere_count());
    spheres.push(Sphere {
        center: joints[0],
        radius: model.radius,
        link: 0,
    });
    for (link, &k) in model.spheres_per_link.iter().enumerate() {
        let (a, b) = (joints[link], joints[link + 1]);
        for s in 1..=k {
            let t = s as f64 / k as f64;
            spheres.push(Sphere {
                center: Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)),
                radius: model.radius,
                link: link + 1,
            });
        }
    }
    Pose { joints, spheres }
}

/// Minimum clearance between the robot's discs and the occupied cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClearanceResult {
    /// Surface-to-cell clearance in meters, clamped at zero.
    pub d_c: f64,
    pub in_collision: bool,
}

/// Clearance of an arbitrary disc set. `cap` is returned on an empty grid.
pub fn clearance_of_spheres(grid: &OccupancyGrid, spheres: &[Sphere], cap: f64) -> ClearanceResult {
    if grid.is_empty() {
        return ClearanceResult {
            d_c: cap,
            in_collision: false,
        };
    }
    // Visit discs nearest-first by their cheap lower bound so the exact
    // searches can be cut off at the running minimum.
    let mut order: Vec<(f64, usize)> = spheres
        .iter()
        .enumerate()
        .map(|(k, s)| (grid.distance_lower_bound(s.center) - s.radius, k))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = f64::INFINITY;
    for (bound, k) in order {
        if bound >= best {
            break;
        }
        let s = &spheres[k];
        let d = grid.distance_below(s.center, best + s.radius) - s.radius;
        if d < best {
            best = d;
        }
        if best <= 0.0 {
            break;
        }
    }
    if best <= 0.0 {
        ClearanceResult {
            d_c: 0.0,
            in_collision: true,
        }
    } else {
        ClearanceResult {
            d_c: best,
            in_collision: false,
        }
    }
}

/// Minimum clearance `d_c` of configuration `q`.
pub fn clearance(
    chain: &KinematicChain,
    model: &SphereChainModel,
    grid: &OccupancyGrid,
    q: &[f64],
    cap: f64,
) -> Result<ClearanceResult> {
    let pose = forward_kinematics(chain, model, q)?;
    Ok(clearance_of_spheres(grid, &pose.spheres, cap))
}

/// Whether any disc touches an occupied cell (touching counts).
pub fn in_collision(chain: &KinematicChain, model: &SphereChainModel, grid: &OccupancyGrid, q: &[f64]) -> bool {
    if grid.is_empty() {
        return false;
    }
    let pose = pose_unchecked(chain, model, q);
    spheres_collide(grid, &pose.spheres)
}

fn spheres_collide(grid: &OccupancyGrid, spheres: &[Sphere]) -> bool {
    // Distal discs sweep the most, so test from the tip inwards.
    spheres
        .iter()
        .rev()
        .any(|s| grid.distance_lower_bound(s.center) <= s.radius && grid.is_within(s.center, s.radius))
}

/// Moment arm `r_i` of joint `i` (1-based): the farthest reach, including
/// disc radius, of any disc on links `i..=n` from joint `i`'s pivot.
pub fn moment_arm(pose: &Pose, i: usize) -> Result<f64> {
    let n = pose.joints.len() - 1;
    if i == 0 || i > n {
        return Err(Error::JointIndex { index: i, dof: n });
    }
    Ok(moment_arm_unchecked(pose, i))
}

fn moment_arm_unchecked(pose: &Pose, i: usize) -> f64 {
    let pivot = pose.joints[i - 1];
    pose.spheres
        .iter()
        .filter(|s| s.link >= i)
        .map(|s| s.center.distance(&pivot) + s.radius)
        .fold(0.0, f64::max)
}

/// All moment arms `r_1..r_n`.
pub fn moment_arms(pose: &Pose) -> Vec<f64> {
    (1..pose.joints.len()).map(|i| moment_arm_unchecked(pose, i)).collect()
}

/// Interpolation step (radians) that keeps the workspace sweep of any disc
/// point per sample below `cell_size`. Uses a configuration-independent bound
/// on every moment arm (total chain length plus disc radius).
pub fn default_check_step(chain: &KinematicChain, model: &SphereChainModel, cell_size: f64) -> f64 {
    cell_size / (chain.total_length() + model.radius)
}

/// Checks samples along the straight joint-space segment `q_a -> q_b`
/// (endpoints included), spaced at most `step` apart in the max-norm.
/// Returns `true` when every sample is collision-free.
pub fn motion_collision_check(
    chain: &KinematicChain,
    model: &SphereChainModel,
    grid: &OccupancyGrid,
    q_a: &[f64],
    q_b: &[f64],
    step: f64,
) -> bool {
    debug_assert!(step > 0.0);
    if grid.is_empty() {
        return true;
    }
    let span = q_a.iter().zip(q_b).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max);
    let segments = (span / step).ceil().max(0.0) as usize;
    let mut buf = vec![0.0; q_a.len()];
    let free_at = |t: f64, buf: &mut Vec<f64>| {
        for (k, v) in buf.iter_mut().enumerate() {
            *v = q_a[k] + t * (q_b[k] - q_a[k]);
        }
        !in_collision(chain, model, grid, buf)
    };
    if segments == 0 {
        return free_at(0.0, &mut buf);
    }
    // The far endpoint is the most likely to collide; test it first.
    if !free_at(1.0, &mut buf) {
        return false;
    }
    (0..segments).all(|k| free_at(k as f64 / segments as f64, &mut buf))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn two_link() -> KinematicChain {
        KinematicChain::new(Point::new(0.0, 0.0), vec![1.0, 1.0]).unwrap()
    }

    fn close(a: Point, b: Point) -> bool {
        a.distance(&b) < 1e-12
    }

    #[test]
    fn forward_kinematics_examples() {
        let chain = two_link();
        let ee = |q: &[f64]| *chain.joint_positions(q).unwrap().last().unwrap();
        assert!(close(ee(&[0.0, 0.0]), Point::new(2.0, 0.0)));
        assert!(close(ee(&[FRAC_PI_2, 0.0]), Point::new(0.0, 2.0)));
        assert!(close(ee(&[FRAC_PI_2, -FRAC_PI_2]), Point::new(1.0, 1.0)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let chain = two_link();
        assert!(matches!(
            chain.joint_positions(&[0.0]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn sphere_centers_are_evenly_spaced() {
        let chain = two_link();
        let model = SphereChainModel::new(vec![4, 2], 0.3).unwrap();
        let pose = forward_kinematics(&chain, &model, &[0.0, 0.0]).unwrap();
        let xs: Vec<f64> = pose.spheres.iter().map(|s| s.center.x).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0]);
        assert_eq!(model.sphere_count(), 7);
    }

    #[test]
    fn coverage_validation() {
        let chain = two_link();
        assert!(SphereChainModel::new(vec![1, 1], 0.1)
            .unwrap()
            .check_coverage(&chain)
            .is_err());
        assert!(SphereChainModel::new(vec![5, 5], 0.1)
            .unwrap()
            .check_coverage(&chain)
            .is_ok());
        let covering = SphereChainModel::covering(&chain, 0.05).unwrap();
        assert_eq!(covering.spheres_per_link(), &[20, 20]);
        assert!(SphereChainModel::new(vec![0, 1], 0.1).is_err());
    }

    #[test]
    fn empty_grid_clearance_is_cap() {
        let chain = two_link();
        let model = SphereChainModel::new(vec![10, 10], 0.1).unwrap();
        let grid = OccupancyGrid::empty(Point::new(-3.0, -3.0), Point::new(3.0, 3.0), 0.1).unwrap();
        let c = clearance(&chain, &model, &grid, &[0.3, 0.2], DEFAULT_CLEARANCE_CAP).unwrap();
        assert_eq!(
            c,
            ClearanceResult {
                d_c: 1.0,
                in_collision: false
            }
        );
    }

    #[test]
    fn single_sphere_clearance() {
        // One cell [0.3, 0.4] x [-0.05, 0.05].
        let origin = Point::new(-0.5, -0.05);
        let mut cells = vec![false; 10];
        cells[8] = true;
        let grid = OccupancyGrid::from_cells(origin, 0.1, 10, 1, cells).unwrap();
        let (lo, hi) = grid.cell_box(8, 0);
        assert!((lo.x - 0.3).abs() < 1e-12 && (hi.x - 0.4).abs() < 1e-12);
        let sphere = Sphere {
            center: Point::new(0.0, 0.0),
            radius: 0.1,
            link: 0,
        };
        let c = clearance_of_spheres(&grid, &[sphere], 1.0);
        assert!((c.d_c - 0.2).abs() < 1e-12);
        assert!(!c.in_collision);
    }

    #[test]
    fn touching_counts_as_collision() {
        let mut cells = vec![false; 10];
        cells[5] = true;
        let grid = OccupancyGrid::from_cells(Point::new(0.0, 0.0), 0.1, 10, 1, cells).unwrap();
        let sphere = Sphere {
            center: Point::new(0.4, 0.05),
            radius: 0.1,
            link: 1,
        };
        let c = clearance_of_spheres(&grid, &[sphere], 1.0);
        assert!(c.in_collision);
        assert_eq!(c.d_c, 0.0);
    }

    #[test]
    fn moment_arm_examples() {
        let chain = two_link();
        let model = SphereChainModel::new(vec![1, 1], 0.1).unwrap();
        let pose = forward_kinematics(&chain, &model, &[0.0, 0.0]).unwrap();
        assert!((moment_arm(&pose, 1).unwrap() - 2.1).abs() < 1e-12);
        assert!((moment_arm(&pose, 2).unwrap() - 1.1).abs() < 1e-12);
        for q2 in [-2.0, -0.4, 0.9, 3.0] {
            let pose = forward_kinematics(&chain, &model, &[0.0, q2]).unwrap();
            assert!((moment_arm(&pose, 2).unwrap() - 1.1).abs() < 1e-12);
        }
        assert!(matches!(moment_arm(&pose, 0), Err(Error::JointIndex { .. })));
        assert!(matches!(moment_arm(&pose, 3), Err(Error::JointIndex { .. })));
    }

    #[test]
    fn motion_check_trivial_cases() {
        let chain = two_link();
        let model = SphereChainModel::new(vec![10, 10], 0.1).unwrap();
        let empty = OccupancyGrid::empty(Point::new(-3.0, -3.0), Point::new(3.0, 3.0), 0.1).unwrap();
        assert!(motion_collision_check(
            &chain,
            &model,
            &empty,
            &[0.0, 0.0],
            &[3.0, -3.0],
            0.01
        ));

        let wall = crate::workspace::Obstacle::Rect {
            min: Point::new(1.0, 1.0),
            max: Point::new(1.2, 1.2),
        };
        let grid = OccupancyGrid::rasterize(Point::new(-3.0, -3.0), Point::new(3.0, 3.0), 0.05, &[wall]).unwrap();
        assert!(motion_collision_check(
            &chain,
            &model,
            &grid,
            &[0.0, 0.0],
            &[0.0, 0.0],
            0.01
        ));
    }
}
