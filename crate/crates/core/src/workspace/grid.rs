use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or vector in the workspace plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

/// Euclidean distance from `p` to the closed axis-aligned box `[min, max]`.
///
/// Zero when `p` lies inside or on the boundary of the box.
#[inline]
pub fn point_box_distance(p: Point, min: Point, max: Point) -> f64 {
    let dx = (min.x - p.x).max(p.x - max.x).max(0.0);
    let dy = (min.y - p.y).max(p.y - max.y).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

/// Obstacle shapes accepted by the rasterizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Obstacle {
    Rect { min: Point, max: Point },
    Circle { center: Point, radius: f64 },
}

impl Obstacle {
    /// Axis-aligned bounding box of the shape.
    pub fn bounds(&self) -> (Point, Point) {
        match *self {
            Obstacle::Rect { min, max } => (min, max),
            Obstacle::Circle { center, radius } => (
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            ),
        }
    }

    /// Closed-set membership test.
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Obstacle::Rect { min, max } => p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y,
            Obstacle::Circle { center, radius } => p.distance(&center) <= radius,
        }
    }
}

/// Sentinel for "no occupied cell in range" in the chessboard field.
const FAR: u32 = u32::MAX;

/// Slack subtracted from ring lower bounds so that rounding in cell-box
/// coordinates can never prune a cell that is actually the nearest.
const BOUND_SLACK: f64 = 1e-9;

/// Snap values within 1e-9 of an integer onto it, so that geometry aligned
/// with cell edges is not perturbed by division round-off.
fn snap(t: f64) -> f64 {
    let r = t.round();
    if (t - r).abs() < 1e-9 {
        r
    } else {
        t
    }
}

/// Two-dimensional occupancy grid with exact point-to-cell distance queries.
///
/// Cell `(i, j)` is the closed square
/// `[ox + i*cs, ox + (i+1)*cs] x [oy + j*cs, oy + (j+1)*cs]`.
/// The grid is immutable once built.
#[derive(Debug, Clone)]
pub struct OccupancyGrid {
    origin: Point,
    cell_size: f64,
    width: usize,
    height: usize,
    occupied: Vec<bool>,
    occupied_count: usize,
    // Chebyshev (index) distance from each cell to the nearest occupied cell.
    chessboard: Vec<u32>,
}

impl OccupancyGrid {
    /// Builds a grid from explicit per-cell occupancy, row-major with `x` fastest.
    pub fn from_cells(origin: Point, cell_size: f64, width: usize, height: usize, occupied: Vec<bool>) -> Result<Self> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::Validation(format!(
                "cell_size must be positive, got {cell_size}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::Validation("grid must have at least one cell".into()));
        }
        if occupied.len() != width * height {
            return Err(Error::Validation(format!(
                "occupancy has {} cells, expected {}",
                occupied.len(),
                width * height
            )));
        }
        let occupied_count = occupied.iter().filter(|&&o| o).count();
        let chessboard = chessboard_transform(&occupied, width, height);
        Ok(OccupancyGrid {
            origin,
            cell_size,
            width,
            height,
            occupied,
            occupied_count,
            chessboard,
        })
    }

    /// An obstacle-free grid covering `[min, max]`.
    pub fn empty(min: Point, max: Point, cell_size: f64) -> Result<Self> {
        let (w, h) = Self::dimensions_for(min, max, cell_size)?;
        Self::from_cells(min, cell_size, w, h, vec![false; w * h])
    }

    /// Rasterizes `obstacles` onto a grid covering `[min, max]`.
    ///
    /// A cell is occupied when it overlaps an obstacle with positive area.
    /// Zero-area shapes (degenerate rectangles, zero-radius circles) occupy
    /// every cell they touch. Either way every point of every shape that lies
    /// inside the grid is covered by the union of occupied cells.
    pub fn rasterize(min: Point, max: Point, cell_size: f64, obstacles: &[Obstacle]) -> Result<Self> {
        let (w, h) = Self::dimensions_for(min, max, cell_size)?;
        let mut occupied = vec![false; w * h];
        for obstacle in obstacles {
            mark_obstacle(&mut occupied, min, cell_size, w, h, obstacle);
        }
        Self::from_cells(min, cell_size, w, h, occupied)
    }

    fn dimensions_for(min: Point, max: Point, cell_size: f64) -> Result<(usize, usize)> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::Validation(format!(
                "cell_size must be positive, got {cell_size}"
            )));
        }
        if !(max.x > min.x && max.y > min.y) {
            return Err(Error::Validation("workspace max must exceed min".into()));
        }
        let w = snap((max.x - min.x) / cell_size).ceil().max(1.0) as usize;
        let h = snap((max.y - min.y) / cell_size).ceil().max(1.0) as usize;
        Ok((w, h))
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Upper corner of the grid.
    pub fn extent_max(&self) -> Point {
        Point::new(
            self.origin.x + self.width as f64 * self.cell_size,
            self.origin.y + self.height as f64 * self.cell_size,
        )
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied_count
    }

    pub fn is_empty(&self) -> bool {
        self.occupied_count == 0
    }

    pub fn is_occupied(&self, i: usize, j: usize) -> bool {
        self.occupied[j * self.width + i]
    }

    /// Closed box of cell `(i, j)`.
    #[inline]
    pub fn cell_box(&self, i: usize, j: usize) -> (Point, Point) {
        let cs = self.cell_size;
        (
            Point::new(self.origin.x + i as f64 * cs, self.origin.y + j as f64 * cs),
            Point::new(self.origin.x + (i + 1) as f64 * cs, self.origin.y + (j + 1) as f64 * cs),
        )
    }

    /// Iterator over the indices of occupied cells.
    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.occupied
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(move |(k, _)| (k % w, k / w))
    }

    /// Exact distance from `p` to the nearest occupied cell (closed square).
    ///
    /// Returns `f64::INFINITY` on a grid with no occupied cells and `0.0`
    /// when `p` lies in an occupied cell.
    pub fn nearest_occupied_distance(&self, p: Point) -> f64 {
        self.search(p, f64::INFINITY, -1.0)
    }

    /// Like [`nearest_occupied_distance`](Self::nearest_occupied_distance)
    /// but only exact below `limit`: when the true distance is `>= limit` the
    /// return value is some number `>= limit`.
    pub fn distance_below(&self, p: Point, limit: f64) -> f64 {
        self.search(p, limit, -1.0)
    }

    /// Whether some occupied cell lies within `radius` of `p` (boundary inclusive).
    pub fn is_within(&self, p: Point, radius: f64) -> bool {
        self.search(p, radius.next_up(), radius) <= radius
    }

    /// Lower bound on the distance from `p` to any occupied cell, from the
    /// chessboard field.
    #[inline]
    pub fn distance_lower_bound(&self, p: Point) -> f64 {
        if self.occupied_count == 0 {
            return f64::INFINITY;
        }
        let (ci, cj, outside) = self.clamp_cell(p);
        let k = self.chessboard[cj * self.width + ci];
        let ring = (k as f64 - 1.0).max(0.0) * self.cell_size - BOUND_SLACK;
        ring.max(outside)
    }

    // Cell containing (or nearest to) `p`, plus the distance from `p` to the grid.
    #[inline]
    fn clamp_cell(&self, p: Point) -> (usize, usize, f64) {
        let cs = self.cell_size;
        let fx = ((p.x - self.origin.x) / cs).floor();
        let fy = ((p.y - self.origin.y) / cs).floor();
        let ci = fx.clamp(0.0, (self.width - 1) as f64) as usize;
        let cj = fy.clamp(0.0, (self.height - 1) as f64) as usize;
        let outside = point_box_distance(p, self.origin, self.extent_max());
        (ci, cj, outside)
    }

    // Ring search outward from the cell nearest `p`. Every occupied cell at
    // Chebyshev index distance `r` from that cell is at least `(r - 1) * cs`
    // away from `p` (projection onto the grid box is non-expansive), so once
    // that bound reaches the best distance found no further ring can improve
    // it. Returns early as soon as the best distance drops to `stop_at`.
    fn search(&self, p: Point, limit: f64, stop_at: f64) -> f64 {
        if self.occupied_count == 0 {
            return f64::INFINITY;
        }
        let (ci, cj, outside) = self.clamp_cell(p);
        if outside >= limit {
            return outside;
        }
        let start = self.chessboard[cj * self.width + ci] as usize;
        let max_ring = ci.max(self.width - 1 - ci).max(cj).max(self.height - 1 - cj);
        let mut best = limit;
        let (ci, cj) = (ci as isize, cj as isize);
        let (w, h) = (self.width as isize, self.height as isize);
        for r in start..=max_ring {
            let ring_bound = (r as f64 - 1.0).max(0.0) * self.cell_size - BOUND_SLACK;
            if ring_bound >= best {
                break;
            }
            let r = r as isize;
            let visit = |i: isize, j: isize, best: &mut f64| {
                if i < 0 || j < 0 || i >= w || j >= h {
                    return;
                }
                let (i, j) = (i as usize, j as usize);
                if self.occupied[j * self.width + i] {
                    let (lo, hi) = self.cell_box(i, j);
                    let d = point_box_distance(p, lo, hi);
                    if d < *best {
                        *best = d;
                    }
                }
            };
            if r == 0 {
                visit(ci, cj, &mut best);
            } else {
                for i in (ci - r)..=(ci + r) {
                    visit(i, cj - r, &mut best);
                    visit(i, cj + r, &mut best);
                }
                for j in (cj - r + 1)..=(cj + r - 1) {
                    visit(ci - r, j, &mut best);
                    visit(ci + r, j, &mut best);
                }
            }
            if best <= stop_at {
                return best;
            }
        }
        best
    }
}

// Cell index range covered by the closed interval [a, b] (in cell units),
// clipped to [0, n). Positive-length intervals take the cells they overlap
// with positive length; points take every cell they touch.
fn cell_range(a: f64, b: f64, n: usize) -> Option<(usize, usize)> {
    let (a, b) = (snap(a), snap(b));
    let (lo, hi) = if b > a {
        (a.floor(), b.ceil() - 1.0)
    } else if a == a.floor() {
        (a - 1.0, a)
    } else {
        (a.floor(), a.floor())
    };
    let lo = lo.max(0.0);
    let hi = hi.min(n as f64 - 1.0);
    if hi < lo {
        None
    } else {
        Some((lo as usize, hi as usize))
    }
}

fn mark_obstacle(occupied: &mut [bool], origin: Point, cs: f64, w: usize, h: usize, obstacle: &Obstacle) {
    let (lo, hi) = obstacle.bounds();
    let Some((i0, i1)) = cell_range((lo.x - origin.x) / cs, (hi.x - origin.x) / cs, w) else {
        return;
    };
    let Some((j0, j1)) = cell_range((lo.y - origin.y) / cs, (hi.y - origin.y) / cs, h) else {
        return;
    };
    for j in j0..=j1 {
        for i in i0..=i1 {
            let hit = match *obstacle {
                Obstacle::Rect { .. } => true,
                Obstacle::Circle { center, radius } => {
                    let cmin = Point::new(origin.x + i as f64 * cs, origin.y + j as f64 * cs);
                    let cmax = Point::new(origin.x + (i + 1) as f64 * cs, origin.y + (j + 1) as f64 * cs);
                    let d = point_box_distance(center, cmin, cmax);
                    d < radius || d == 0.0
                }
            };
            if hit {
                occupied[j * w + i] = true;
            }
        }
    }
}

// Exact chessboard distance transform (two raster passes, 8-neighbourhood).
fn chessboard_transform(occupied: &[bool], w: usize, h: usize) -> Vec<u32> {
    let mut d: Vec<u32> = occupied.iter().map(|&o| if o { 0 } else { FAR }).collect();
    let relax = |d: &mut Vec<u32>, k: usize, other: usize| {
        let cand = d[other].saturating_add(1);
        if cand < d[k] {
            d[k] = cand;
        }
    };
    for j in 0..h {
        for i in 0..w {
            let k = j * w + i;
            if i > 0 {
                relax(&mut d, k, k - 1);
            }
            if j > 0 {
                relax(&mut d, k, k - w);
                if i > 0 {
                    relax(&mut d, k, k - w - 1);
                }
                if i + 1 < w {
                    relax(&mut d, k, k - w + 1);
                }
            }
        }
    }
    for j in (0..h).rev() {
        for i in (0..w).rev() {
            let k = j * w + i;
            if i + 1 < w {
                relax(&mut d, k, k + 1);
            }
            if j + 1 < h {
                relax(&mut d, k, k + w);
                if i + 1 < w {
                    relax(&mut d, k, k + w + 1);
                }
                if i > 0 {
                    relax(&mut d, k, k + w - 1);
                }
            }
        }
    }
    d
}
