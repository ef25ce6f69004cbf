//! Points, point collections, and half-open squared-distance intervals.

use crate::error::Error;
use crate::Result;

/// Deterministic seeded generator used everywhere randomness is needed.
/// Identical seeds produce identical run traces.
pub type Rng = rand_chacha::ChaCha8Rng;

/// A planar point with finite f64 coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Squared Euclidean distance between two points. All distance logic in
/// this crate compares these values; square roots appear only in geometry
/// construction and in user-facing output.
#[inline]
pub fn sq_dist(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

fn validate(points: &[Point]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::NonFiniteCoordinate(i));
        }
    }
    Ok(())
}

/// An indexed set of points; the index is the point id. Duplicate
/// coordinates are allowed and keep distinct ids.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a set, rejecting NaN and infinite coordinates.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        validate(&points)?;
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn get(&self, id: u32) -> Point {
        self.points[id as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.points.iter().copied()
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.points
    }

    /// Total number of unordered pairs, `n(n-1)/2`.
    pub fn unordered_pairs(&self) -> u64 {
        let n = self.points.len() as u64;
        n * n.saturating_sub(1) / 2
    }
}

/// An ordered sequence of points (order is meaningful, e.g. polygonal
/// curves). Same validation as [`PointSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointSequence {
    points: Vec<Point>,
}

impl PointSequence {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        validate(&points)?;
        Ok(PointSequence { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.points
    }

    /// View of the same points as an unordered set.
    pub fn to_point_set(&self) -> PointSet {
        PointSet {
            points: self.points.clone(),
        }
    }
}

/// Half-open interval of squared distances: `v` is inside iff
/// `lo < v <= hi`. `hi` may be `f64::INFINITY`; `lo` is always finite and
/// nonnegative. `lo == hi` is the empty interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqInterval {
    lo: f64,
    hi: f64,
}

impl SqInterval {
    /// Builds an interval, enforcing `0 <= lo <= hi` and finite `lo`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0) || !lo.is_finite() || hi.is_nan() || hi < lo {
            return Err(Error::InvalidInterval(lo, hi));
        }
        Ok(SqInterval { lo, hi })
    }

    /// The all-positive-values interval `(0, +inf]`.
    pub fn everything() -> Self {
        SqInterval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Membership test `lo < v <= hi`.
    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo < v && v <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

/// Number of unordered coincident pairs (squared distance exactly zero)
/// inside one point set. Groups points by exact coordinate value.
pub fn coincident_pairs(points: &PointSet) -> u64 {
    let mut counts = coordinate_groups(points);
    counts.sort_unstable();
    let mut total = 0u64;
    let mut run = 1u64;
    for w in counts.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    if !counts.is_empty() {
        total += run * (run - 1) / 2;
    }
    total
}

/// Number of cross pairs `(a, b)` in `A x B` at squared distance exactly
/// zero.
pub fn coincident_cross_pairs(a: &PointSet, b: &PointSet) -> u64 {
    use std::collections::HashMap;
    let mut map: HashMap<(u64, u64), u64> = HashMap::new();
    for p in a.iter() {
        *map.entry(coord_key(p)).or_insert(0) += 1;
    }
    let mut total = 0u64;
    for q in b.iter() {
        if let Some(&c) = map.get(&coord_key(q)) {
            total += c;
        }
    }
    total
}

fn coordinate_groups(points: &PointSet) -> Vec<(u64, u64)> {
    points.iter().map(coord_key).collect()
}

/// Exact coordinate key; -0.0 and +0.0 collapse so the key agrees with
/// numeric equality (and hence with `sq_dist == 0`).
#[inline]
pub(crate) fn coord_key(p: Point) -> (u64, u64) {
    let nx = if p.x == 0.0 { 0.0 } else { p.x };
    let ny = if p.y == 0.0 { 0.0 } else { p.y };
    (nx.to_bits(), ny.to_bits())
}
