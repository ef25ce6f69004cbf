//! Hierarchical (1/r)-cuttings of circle arrangements with
//! pseudo-trapezoid cells.
//!
//! Level 0 is a single cell covering the plane. Each later level tiles
//! every cell of the previous level with pseudo-trapezoids (two vertical
//! sides, a circular-arc top and bottom) obtained from the vertical
//! decomposition of a random sample of the cell's conflict circles; the
//! per-cell conflict bound shrinks by the refinement ratio `rho` per
//! level and is verified, with violating cells re-split on larger
//! samples.
//!
//! Point assignment is exact and half-open: a point on a shared vertical
//! wall belongs to the cell on its right, a point on a shared arc to the
//! cell below. Every boundary comparison reduces to the sign of
//! `|q - center|^2 - sq_radius`, so points exactly on input circles are
//! classified consistently everywhere.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::config::Config;
use crate::error::Error;
use crate::geom::{coord_key, sq_dist, Point, PointSet, Rng, SqInterval};
use crate::Result;

/// Distance annulus of one query point: all `q` with
/// `interval.lo < |pq|^2 <= interval.hi`.
#[derive(Debug, Clone, Copy)]
pub struct Annulus {
    /// Id of the owning query point.
    pub id: u32,
    pub center: Point,
    pub interval: SqInterval,
}

impl Annulus {
    #[inline]
    pub fn contains_point(&self, q: Point) -> bool {
        self.interval.contains(sq_dist(self.center, q))
    }
}

/// Which annulus boundary a circle represents. Points exactly on an
/// `Inner` circle are outside the annulus; points exactly on an `Outer`
/// circle are inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleSide {
    Inner,
    Outer,
}

/// One boundary circle of an annulus, tagged with its owner.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryCircle {
    pub center: Point,
    pub sq_radius: f64,
    pub owner: u32,
    pub side: CircleSide,
    radius: f64,
}

impl BoundaryCircle {
    /// Requires a finite positive squared radius; degenerate (zero
    /// radius) annulus boundaries are handled outside the cutting.
    pub fn new(center: Point, sq_radius: f64, owner: u32, side: CircleSide) -> Result<Self> {
        if !sq_radius.is_finite() || sq_radius <= 0.0 {
            return Err(Error::InvalidInstance("boundary circle radius"));
        }
        Ok(BoundaryCircle {
            center,
            sq_radius,
            owner,
            side,
            radius: sq_radius.sqrt(),
        })
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[inline]
    fn geom_key(&self) -> (u64, u64, u64) {
        let (x, y) = coord_key(self.center);
        (x, y, self.sq_radius.to_bits())
    }

    #[inline]
    fn geom_eq(&self, center: Point, sq_radius: f64) -> bool {
        self.center.x == center.x && self.center.y == center.y && self.sq_radius == sq_radius
    }
}

/// Reference to a cell's top or bottom boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcRef {
    /// Unbounded below.
    MinusInf,
    /// Unbounded above.
    PlusInf,
    /// An arc of `circle`; `upper` selects the branch
    /// `y = cy + sqrt(r^2 - (x - cx)^2)` versus the lower branch.
    Arc { circle: u32, upper: bool },
}

/// A pseudo-trapezoid: vertical sides at `x_lo`/`x_hi` (possibly
/// infinite), bounded below and above by circular arcs or infinities.
#[derive(Debug, Clone, Copy)]
pub struct PseudoTrapezoid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub bottom: ArcRef,
    pub top: ArcRef,
}

/// One cell of the hierarchical cutting.
#[derive(Debug, Clone)]
pub struct CuttingCell {
    pub shape: PseudoTrapezoid,
    pub level: u32,
    pub parent: Option<u32>,
    pub children: Vec<u32>,
    /// Ids of circles crossing the cell's open interior, sorted.
    pub conflict: Vec<u32>,
    /// Point ids assigned to this cell, filled by [`locate_points`].
    pub canonical_b: Vec<u32>,
    /// Annulus ids fully containing this cell but not its parent,
    /// filled by [`compute_contained_annuli`].
    pub contained_a: Vec<u32>,
    /// Enclosing axis box (may have infinite extents).
    bbox: [f64; 4],
}

/// Hierarchical cutting of a set of circles.
#[derive(Debug, Clone)]
pub struct HierarchicalCutting {
    cells: Vec<CuttingCell>,
    levels: Vec<Vec<u32>>,
    circles: Vec<BoundaryCircle>,
    /// Circle ids per owning annulus id.
    owner_circles: HashMap<u32, Vec<u32>>,
    /// Circle ids per exact geometry, for duplicate-circle lookups.
    geom_groups: HashMap<(u64, u64, u64), Vec<u32>>,
    pub r: f64,
    pub rho: f64,
}

impl HierarchicalCutting {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_cells(&self, level: usize) -> &[u32] {
        &self.levels[level]
    }

    pub fn cell(&self, id: u32) -> &CuttingCell {
        &self.cells[id as usize]
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn circles(&self) -> &[BoundaryCircle] {
        &self.circles
    }

    pub fn root(&self) -> u32 {
        self.levels[0][0]
    }

    /// Ids of circles geometrically identical to the cell's top-arc
    /// circle ("riders"). Their owners must be treated as unresolved at
    /// this cell: owned top-arc points lie exactly on those circles.
    pub fn top_riders(&self, cell: u32) -> &[u32] {
        match self.cells[cell as usize].shape.top {
            ArcRef::Arc { circle, .. } => self
                .geom_groups
                .get(&self.circles[circle as usize].geom_key())
                .map(|v| v.as_slice())
                .unwrap_or(&[]),
            _ => &[],
        }
    }

    /// Is `owner` certified (listed in `contained_a`) at `cell` or any
    /// of its ancestors? Guards both certification and subproblem
    /// activation against double coverage: containment evaluation is
    /// not perfectly monotone down a path (duplicate circle geometries
    /// and conservative conflict lists can make it flicker), so the
    /// whole chain is consulted, not just the parent.
    pub fn certified_at_or_above(&self, cell: u32, owner: u32) -> bool {
        let mut cur = Some(cell);
        while let Some(c) = cur {
            let cc = &self.cells[c as usize];
            if cc.contained_a.binary_search(&owner).is_ok() {
                return true;
            }
            cur = cc.parent;
        }
        false
    }

    /// Circle ids owned by one annulus id.
    pub fn circles_of_owner(&self, owner: u32) -> &[u32] {
        self.owner_circles
            .get(&owner)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

// ---------------------------------------------------------------------
// Exact-side predicates.
// ---------------------------------------------------------------------

/// Sign of `|q - center|^2 - sq_radius`: Less = strictly inside the
/// disk, Equal = exactly on the circle, Greater = strictly outside.
#[inline]
fn point_vs_circle(q: Point, center: Point, sq_radius: f64) -> Ordering {
    sq_dist(q, center).partial_cmp(&sq_radius).unwrap()
}

/// Position of `q` relative to one branch of a circle, evaluated at
/// `q.x`: Less = strictly below the arc, Equal = on it, Greater =
/// strictly above. Exact because it reduces to `point_vs_circle`.
#[inline]
fn point_vs_arc(q: Point, c: &BoundaryCircle, upper: bool) -> Ordering {
    if upper {
        if q.y < c.center.y {
            return Ordering::Less;
        }
        point_vs_circle(q, c.center, c.sq_radius)
    } else {
        if q.y > c.center.y {
            return Ordering::Greater;
        }
        match point_vs_circle(q, c.center, c.sq_radius) {
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => Ordering::Less,
        }
    }
}

/// Position of `q` relative to a cell boundary reference.
#[inline]
fn point_vs_arcref(q: Point, arc: ArcRef, circles: &[BoundaryCircle]) -> Ordering {
    match arc {
        ArcRef::MinusInf => Ordering::Greater,
        ArcRef::PlusInf => Ordering::Less,
        ArcRef::Arc { circle, upper } => point_vs_arc(q, &circles[circle as usize], upper),
    }
}

/// Arc height at abscissa `x` (clamped under the square root so slab
/// endpoints evaluate cleanly).
#[inline]
fn arc_y(c: &BoundaryCircle, upper: bool, x: f64) -> f64 {
    let dx = x - c.center.x;
    let h = (c.sq_radius - dx * dx).max(0.0).sqrt();
    if upper {
        c.center.y + h
    } else {
        c.center.y - h
    }
}

impl HierarchicalCutting {
    /// Half-open ownership: `q` lies in the cell under the tie rule
    /// (left wall and top arc belong to the cell, right wall and bottom
    /// arc do not).
    pub fn cell_owns(&self, cell: u32, q: Point) -> bool {
        let s = &self.cells[cell as usize].shape;
        q.x >= s.x_lo
            && q.x < s.x_hi
            && point_vs_arcref(q, s.bottom, &self.circles) == Ordering::Greater
            && point_vs_arcref(q, s.top, &self.circles) != Ordering::Greater
    }

    /// An interior point of the cell: midpoint in x, midpoint between
    /// the bounding arcs there.
    pub fn representative_point(&self, cell: u32) -> Point {
        let s = &self.cells[cell as usize].shape;
        let x = match (s.x_lo.is_finite(), s.x_hi.is_finite()) {
            (true, true) => 0.5 * (s.x_lo + s.x_hi),
            (true, false) => s.x_lo + 1.0,
            (false, true) => s.x_hi - 1.0,
            (false, false) => 0.0,
        };
        let bot = match s.bottom {
            ArcRef::Arc { circle, upper } => Some(arc_y(&self.circles[circle as usize], upper, x)),
            _ => None,
        };
        let top = match s.top {
            ArcRef::Arc { circle, upper } => Some(arc_y(&self.circles[circle as usize], upper, x)),
            _ => None,
        };
        let y = match (bot, top) {
            (Some(b), Some(t)) => 0.5 * (b + t),
            (Some(b), None) => b + 1.0,
            (None, Some(t)) => t - 1.0,
            (None, None) => 0.0,
        };
        Point::new(x, y)
    }
}

// ---------------------------------------------------------------------
// Circle-versus-cell intersection.
// ---------------------------------------------------------------------

/// Intersection points of two distinct circles (0, 1 or 2).
fn circle_intersections(a: &BoundaryCircle, b: &BoundaryCircle) -> Vec<Point> {
    let d2 = sq_dist(a.center, b.center);
    if d2 == 0.0 {
        return Vec::new();
    }
    let d = d2.sqrt();
    let (r1, r2) = (a.radius, b.radius);
    if d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let along = (d2 + a.sq_radius - b.sq_radius) / (2.0 * d);
    let h2 = a.sq_radius - along * along;
    let h = h2.max(0.0).sqrt();
    let ex = (b.center.x - a.center.x) / d;
    let ey = (b.center.y - a.center.y) / d;
    let mx = a.center.x + along * ex;
    let my = a.center.y + along * ey;
    if h == 0.0 {
        vec![Point::new(mx, my)]
    } else {
        vec![
            Point::new(mx - h * ey, my + h * ex),
            Point::new(mx + h * ey, my - h * ex),
        ]
    }
}

impl HierarchicalCutting {
    /// Does `c` intersect the open interior of the cell shape? Candidate
    /// boundary angles partition the circle into pieces whose midpoints
    /// are tested; every maximal piece inside the cell has its endpoints
    /// among the candidates, so some midpoint witnesses any crossing.
    fn circle_crosses_shape(&self, c: &BoundaryCircle, shape: &PseudoTrapezoid, bbox: &[f64; 4]) -> bool {
        // Quick reject against the cell's axis box, with a relative
        // margin so bbox rounding can never hide a genuine crossing.
        let (lo, hi) = box_sq_dist_range(c.center, bbox);
        let margin = 1e-9 * (1.0 + c.sq_radius);
        if c.sq_radius < lo - margin || c.sq_radius > hi + margin {
            return false;
        }
        let mut angles: Vec<f64> = Vec::with_capacity(12);
        angles.extend_from_slice(&[
            0.0,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::PI,
            1.5 * std::f64::consts::PI,
        ]);
        for x in [shape.x_lo, shape.x_hi] {
            if x.is_finite() {
                let t = (x - c.center.x) / c.radius;
                if t.abs() <= 1.0 {
                    let a = t.clamp(-1.0, 1.0).acos();
                    angles.push(a);
                    angles.push(std::f64::consts::TAU - a);
                }
            }
        }
        for arc in [shape.bottom, shape.top] {
            if let ArcRef::Arc { circle, .. } = arc {
                let other = &self.circles[circle as usize];
                for p in circle_intersections(c, other) {
                    let a = (p.y - c.center.y).atan2(p.x - c.center.x);
                    angles.push(a.rem_euclid(std::f64::consts::TAU));
                }
            }
        }
        angles.sort_unstable_by(f64::total_cmp);
        // A wall met exactly at an arc intersection yields two
        // representations of one geometric event, agreeing only to
        // rounding; the micro-gap between them has the cell corner as
        // its midpoint and strict tests there are noise. Collapsing
        // near-equal candidates (also across the wrap) removes those
        // gaps; a genuine crossing this narrow is too shallow for any
        // representable point to lie inside, so nothing real is lost.
        const ANG_EPS: f64 = 1e-9;
        angles.dedup_by(|cur, prev| (*cur - *prev).abs() <= ANG_EPS);
        if angles.len() > 1
            && angles[0] + std::f64::consts::TAU - *angles.last().unwrap() <= ANG_EPS
        {
            angles.pop();
        }
        let key = c.geom_key();
        let n = angles.len();
        for i in 0..n {
            let a0 = angles[i];
            let a1 = if i + 1 == n {
                angles[0] + std::f64::consts::TAU
            } else {
                angles[i + 1]
            };
            let mid = 0.5 * (a0 + a1);
            let (sin_mid, cos_mid) = mid.sin_cos();
            let q = Point::new(c.center.x + c.radius * cos_mid, c.center.y + c.radius * sin_mid);
            if !(q.x > shape.x_lo && q.x < shape.x_hi) {
                continue;
            }
            // Against an arc of the same circle geometry the numeric
            // sign of |q - center|^2 - r^2 is rounding noise, so points
            // synthesized on the circle are classified by branch: away
            // from the x extremes (which are always candidate angles)
            // the upper branch lies strictly above the lower.
            let q_upper = sin_mid > 0.0;
            if self.on_circle_vs_arcref(&key, q, q_upper, shape.bottom) == Ordering::Greater
                && self.on_circle_vs_arcref(&key, q, q_upper, shape.top) == Ordering::Less
            {
                return true;
            }
        }
        false
    }

    /// Position of a point synthesized on the circle with geometry `key`
    /// (on its upper or lower branch) relative to a boundary arc.
    fn on_circle_vs_arcref(
        &self,
        key: &(u64, u64, u64),
        q: Point,
        q_upper: bool,
        arc: ArcRef,
    ) -> Ordering {
        match arc {
            ArcRef::MinusInf => Ordering::Greater,
            ArcRef::PlusInf => Ordering::Less,
            ArcRef::Arc { circle, upper } => {
                let oc = &self.circles[circle as usize];
                if oc.geom_key() == *key {
                    if q_upper == upper {
                        Ordering::Equal
                    } else if q_upper {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                } else {
                    point_vs_arc(q, oc, upper)
                }
            }
        }
    }
}

/// Range of squared distances from `p` to the (possibly unbounded) box.
fn box_sq_dist_range(p: Point, bbox: &[f64; 4]) -> (f64, f64) {
    let [x0, x1, y0, y1] = *bbox;
    let dx_out = (x0 - p.x).max(0.0).max(p.x - x1);
    let dy_out = (y0 - p.y).max(0.0).max(p.y - y1);
    let lo = dx_out * dx_out + dy_out * dy_out;
    let fx = if x0.is_finite() && x1.is_finite() {
        (p.x - x0).abs().max((x1 - p.x).abs())
    } else {
        f64::INFINITY
    };
    let fy = if y0.is_finite() && y1.is_finite() {
        (p.y - y0).abs().max((y1 - p.y).abs())
    } else {
        f64::INFINITY
    };
    let hi = if fx.is_finite() && fy.is_finite() {
        fx * fx + fy * fy
    } else {
        f64::INFINITY
    };
    (lo, hi)
}

// ---------------------------------------------------------------------
// Construction.
// ---------------------------------------------------------------------

struct PendingCell {
    shape: PseudoTrapezoid,
    bbox: [f64; 4],
    conflict: Vec<u32>,
    attempt: u32,
}

/// Builds the hierarchical cutting of `circles` with parameter `r` and
/// refinement ratio `rho`. The number of levels beyond the root is
/// `ceil(log_rho r)`; every level-i conflict list is verified against
/// the bound `slack * |circles| / rho^i`, re-splitting violators with
/// doubled samples up to the retry budget.
pub fn build_hierarchical_cutting(
    circles: Vec<BoundaryCircle>,
    r: f64,
    rho: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<HierarchicalCutting> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidInstance("cutting parameter r"));
    }
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::InvalidInstance("refinement ratio rho"));
    }
    let mut owner_circles: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut geom_groups: HashMap<(u64, u64, u64), Vec<u32>> = HashMap::new();
    for (i, c) in circles.iter().enumerate() {
        owner_circles.entry(c.owner).or_default().push(i as u32);
        geom_groups.entry(c.geom_key()).or_default().push(i as u32);
    }
    let root_shape = PseudoTrapezoid {
        x_lo: f64::NEG_INFINITY,
        x_hi: f64::INFINITY,
        bottom: ArcRef::MinusInf,
        top: ArcRef::PlusInf,
    };
    let root = CuttingCell {
        shape: root_shape,
        level: 0,
        parent: None,
        children: Vec::new(),
        conflict: (0..circles.len() as u32).collect(),
        canonical_b: Vec::new(),
        contained_a: Vec::new(),
        bbox: [f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY],
    };
    let mut cutting = HierarchicalCutting {
        cells: vec![root],
        levels: vec![vec![0]],
        circles,
        owner_circles,
        geom_groups,
        r,
        rho,
    };
    let k = if r <= 1.0 {
        0
    } else {
        (r.log2() / rho.log2()).ceil() as usize
    };
    let total = cutting.circles.len() as f64;
    for level in 1..=k {
        let bound = (cfg.slack * total / rho.powi(level as i32)).max(0.0);
        let parents = cutting.levels[level - 1].clone();
        let mut this_level = Vec::new();
        for parent in parents {
            let accepted = split_to_bound(&cutting, parent, bound, cfg, rng)?;
            for pending in accepted {
                let id = cutting.cells.len() as u32;
                cutting.cells.push(CuttingCell {
                    shape: pending.shape,
                    level: level as u32,
                    parent: Some(parent),
                    children: Vec::new(),
                    conflict: pending.conflict,
                    canonical_b: Vec::new(),
                    contained_a: Vec::new(),
                    bbox: pending.bbox,
                });
                cutting.cells[parent as usize].children.push(id);
                this_level.push(id);
            }
        }
        cutting.levels.push(this_level);
    }
    Ok(cutting)
}

/// Splits one parent cell into level-(level) children meeting `bound`,
/// re-splitting violators with doubled samples.
fn split_to_bound(
    cutting: &HierarchicalCutting,
    parent: u32,
    bound: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<Vec<PendingCell>> {
    let pcell = &cutting.cells[parent as usize];
    let mut work = vec![PendingCell {
        shape: pcell.shape,
        bbox: pcell.bbox,
        conflict: pcell.conflict.clone(),
        attempt: 0,
    }];
    let mut accepted = Vec::new();
    while let Some(item) = work.pop() {
        if (item.conflict.len() as f64) <= bound {
            accepted.push(item);
            continue;
        }
        if item.attempt > cfg.split_retries {
            return Err(Error::ConstructionFailure(
                "conflict bound not met within the retry budget",
            ));
        }
        let children = split_once(cutting, &item, cfg, rng);
        if children.len() == 1 && children[0].conflict.len() == item.conflict.len() {
            // No progress; retry with a doubled sample.
            work.push(PendingCell {
                attempt: item.attempt + 1,
                ..children.into_iter().next().unwrap()
            });
            continue;
        }
        for child in children {
            if (child.conflict.len() as f64) <= bound {
                accepted.push(child);
            } else {
                work.push(child);
            }
        }
    }
    Ok(accepted)
}

/// One splitting pass: sample circles from the cell's conflict list,
/// build the vertical decomposition of the sampled arcs clipped to the
/// cell, and recompute child conflict lists.
fn split_once(
    cutting: &HierarchicalCutting,
    cell: &PendingCell,
    cfg: &Config,
    rng: &mut Rng,
) -> Vec<PendingCell> {
    let circles = &cutting.circles;
    let shape = &cell.shape;

    // Distinct geometries of the conflict list; duplicates add nothing
    // to the decomposition.
    let mut reps: Vec<u32> = Vec::new();
    {
        let mut seen = std::collections::HashSet::new();
        for &c in &cell.conflict {
            if seen.insert(circles[c as usize].geom_key()) {
                reps.push(c);
            }
        }
    }
    let target = (cfg.sample_base as f64 * cutting.rho).ceil() as usize;
    let want = target.saturating_mul(1usize << cell.attempt.min(20)).max(1);
    let sample: Vec<u32> = if want >= reps.len() {
        reps.clone()
    } else {
        let mut idx = rand::seq::index::sample(rng, reps.len(), want).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| reps[i]).collect()
    };

    // Boundary circles of the cell itself take part in the event set and
    // in the arc stacks.
    let mut frame: Vec<(u32, bool)> = Vec::new();
    if let ArcRef::Arc { circle, upper } = shape.bottom {
        frame.push((circle, upper));
    }
    if let ArcRef::Arc { circle, upper } = shape.top {
        frame.push((circle, upper));
    }

    // Event abscissas: sampled extremes plus pairwise intersections of
    // sampled and frame circles, clipped strictly inside the cell span.
    let mut events: Vec<f64> = Vec::new();
    let push_event = |events: &mut Vec<f64>, x: f64| {
        if x > shape.x_lo && x < shape.x_hi && x.is_finite() {
            events.push(x);
        }
    };
    let mut event_circles: Vec<u32> = sample.clone();
    for &(c, _) in &frame {
        if !event_circles.contains(&c) {
            event_circles.push(c);
        }
    }
    for &s in &sample {
        let c = &circles[s as usize];
        push_event(&mut events, c.center.x - c.radius);
        push_event(&mut events, c.center.x + c.radius);
    }
    for i in 0..event_circles.len() {
        for j in (i + 1)..event_circles.len() {
            let a = &circles[event_circles[i] as usize];
            let b = &circles[event_circles[j] as usize];
            if a.geom_key() == b.geom_key() {
                continue;
            }
            for p in circle_intersections(a, b) {
                push_event(&mut events, p.x);
            }
        }
    }
    events.sort_unstable_by(f64::total_cmp);
    events.dedup();

    let mut walls = Vec::with_capacity(events.len() + 2);
    walls.push(shape.x_lo);
    walls.extend_from_slice(&events);
    walls.push(shape.x_hi);

    let mut out = Vec::new();
    for w in walls.windows(2) {
        let (xl, xr) = (w[0], w[1]);
        if !(xl < xr) {
            continue;
        }
        let probe = match (xl.is_finite(), xr.is_finite()) {
            (true, true) => 0.5 * (xl + xr),
            (true, false) => xl + 1.0,
            (false, true) => xr - 1.0,
            (false, false) => 0.0,
        };
        // Arcs crossing this slab, deduplicated by geometry and branch;
        // frame arcs go first so they survive deduplication.
        let mut stack: Vec<(u32, bool, f64)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for &(c, upper) in &frame {
            if seen.insert((circles[c as usize].geom_key(), upper)) {
                stack.push((c, upper, arc_y(&circles[c as usize], upper, probe)));
            }
        }
        for &s in &sample {
            let c = &circles[s as usize];
            let dx = probe - c.center.x;
            if dx * dx < c.sq_radius {
                for upper in [false, true] {
                    if seen.insert((c.geom_key(), upper)) {
                        stack.push((s, upper, arc_y(c, upper, probe)));
                    }
                }
            }
        }
        stack.sort_unstable_by(|a, b| {
            f64::total_cmp(&a.2, &b.2)
                .then_with(|| a.0.cmp(&b.0))
                .then_with(|| a.1.cmp(&b.1))
        });

        // Positions of the cell's own boundary arcs in the stack.
        let pos_of = |want: ArcRef, stack: &[(u32, bool, f64)]| -> Option<usize> {
            if let ArcRef::Arc { circle, upper } = want {
                let key = (circles[circle as usize].geom_key(), upper);
                stack
                    .iter()
                    .position(|&(c, u, _)| (circles[c as usize].geom_key(), u) == key)
            } else {
                None
            }
        };
        let bot_pos = pos_of(shape.bottom, &stack);
        let top_pos = pos_of(shape.top, &stack);

        // Boundary references between bottom and top, inclusive.
        let mut refs: Vec<ArcRef> = Vec::new();
        refs.push(shape.bottom);
        let lo_idx = bot_pos.map(|i| i + 1).unwrap_or(0);
        let hi_idx = top_pos.unwrap_or(stack.len());
        if lo_idx <= hi_idx {
            for &(c, u, _) in &stack[lo_idx..hi_idx] {
                refs.push(ArcRef::Arc { circle: c, upper: u });
            }
        }
        refs.push(shape.top);

        for pair in refs.windows(2) {
            let (bottom, top) = (pair[0], pair[1]);
            let child_shape = PseudoTrapezoid {
                x_lo: xl,
                x_hi: xr,
                bottom,
                top,
            };
            let bbox = shape_bbox(&child_shape, circles);
            let mut conflict = Vec::new();
            for &cid in &cell.conflict {
                if cutting.circle_crosses_shape(&circles[cid as usize], &child_shape, &bbox) {
                    conflict.push(cid);
                }
            }
            out.push(PendingCell {
                shape: child_shape,
                bbox,
                conflict,
                attempt: cell.attempt + 1,
            });
        }
    }
    if out.is_empty() {
        // Defensive: keep the cell as its own child.
        out.push(PendingCell {
            shape: *shape,
            bbox: cell.bbox,
            conflict: cell.conflict.clone(),
            attempt: cell.attempt + 1,
        });
    }
    out
}

fn shape_bbox(shape: &PseudoTrapezoid, circles: &[BoundaryCircle]) -> [f64; 4] {
    let y_of = |arc: ArcRef, want_max: bool| -> f64 {
        match arc {
            ArcRef::MinusInf => f64::NEG_INFINITY,
            ArcRef::PlusInf => f64::INFINITY,
            ArcRef::Arc { circle, upper } => {
                let c = &circles[circle as usize];
                let mut vals = Vec::with_capacity(3);
                if shape.x_lo.is_finite() {
                    vals.push(arc_y(c, upper, shape.x_lo));
                }
                if shape.x_hi.is_finite() {
                    vals.push(arc_y(c, upper, shape.x_hi));
                }
                if c.center.x > shape.x_lo && c.center.x < shape.x_hi {
                    vals.push(if upper {
                        c.center.y + c.radius
                    } else {
                        c.center.y - c.radius
                    });
                }
                if vals.is_empty() {
                    return if want_max {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    };
                }
                vals.into_iter()
                    .reduce(|a, b| if want_max { a.max(b) } else { a.min(b) })
                    .unwrap()
            }
        }
    };
    [
        shape.x_lo,
        shape.x_hi,
        y_of(shape.bottom, false),
        y_of(shape.top, true),
    ]
}

// ---------------------------------------------------------------------
// Queries.
// ---------------------------------------------------------------------

/// Cell id at every level containing `q` (root first).
pub fn locate_path(cutting: &HierarchicalCutting, q: Point) -> Vec<u32> {
    let mut path = Vec::with_capacity(cutting.levels.len());
    let mut cur = cutting.root();
    path.push(cur);
    for _ in 1..cutting.levels.len() {
        let children = &cutting.cells[cur as usize].children;
        let mut found = None;
        for &ch in children {
            if cutting.cell_owns(ch, q) {
                found = Some(ch);
                break;
            }
        }
        debug_assert!(
            found.is_some(),
            "point location fell through a level (tiling hole)"
        );
        let next = found.unwrap_or_else(|| {
            // Deterministic fallback for pathological rounding: the child
            // violating the fewest ownership constraints.
            let score = |id: u32| -> u32 {
                let s = &cutting.cells[id as usize].shape;
                let mut v = 0;
                if !(q.x >= s.x_lo && q.x < s.x_hi) {
                    v += 4;
                }
                if point_vs_arcref(q, s.bottom, &cutting.circles) != Ordering::Greater {
                    v += 1;
                }
                if point_vs_arcref(q, s.top, &cutting.circles) == Ordering::Greater {
                    v += 1;
                }
                v
            };
            *children
                .iter()
                .min_by_key(|&&c| (score(c), c))
                .expect("cell has no children")
        });
        path.push(next);
        cur = next;
    }
    path
}

/// Assigns every point of `points` to its cell at every level, filling
/// `canonical_b`. With `preserve_order` the lists are sorted by point
/// id (iteration order guarantees it; the flag is part of the contract).
pub fn locate_points(cutting: &mut HierarchicalCutting, points: &PointSet, preserve_order: bool) {
    let ids: Vec<u32> = (0..points.len() as u32).collect();
    locate_id_subset(cutting, points, &ids);
    if preserve_order {
        debug_assert!(cutting
            .cells
            .iter()
            .all(|c| c.canonical_b.windows(2).all(|w| w[0] < w[1])));
    }
}

/// Assigns only the listed point ids (ascending lists stay ascending).
pub fn locate_id_subset(cutting: &mut HierarchicalCutting, points: &PointSet, ids: &[u32]) {
    for cell in &mut cutting.cells {
        cell.canonical_b.clear();
    }
    for &id in ids {
        let path = locate_path(cutting, points.get(id));
        for cell in path {
            cutting.cells[cell as usize].canonical_b.push(id);
        }
    }
}

/// Does the annulus fully contain the cell's half-open region? True iff
/// neither boundary circle of the annulus conflicts with the cell, the
/// representative interior point lies in the annulus, no circle
/// geometrically equal to the annulus's excluded inner boundary rides
/// the cell's owned top arc, and (for a degenerate inner boundary) the
/// excluded center is not owned by the cell.
pub fn annulus_contains_cell(
    cutting: &HierarchicalCutting,
    annulus: &Annulus,
    cell: u32,
) -> bool {
    let c = &cutting.cells[cell as usize];
    if !annulus.contains_point(cutting.representative_point(cell)) {
        return false;
    }
    for &cid in cutting.circles_of_owner(annulus.id) {
        if c.conflict.binary_search(&cid).is_ok() {
            return false;
        }
    }
    let lo = annulus.interval.lo();
    if lo > 0.0 {
        if let ArcRef::Arc { circle, .. } = c.shape.top {
            if cutting.circles[circle as usize].geom_eq(annulus.center, lo) {
                return false;
            }
        }
    } else if cutting.cell_owns(cell, annulus.center) {
        return false;
    }
    true
}

/// Fills `contained_a`: annulus ids fully containing the cell but not
/// its parent. Candidates at each parent are the owners of conflicting
/// and top-riding circles plus degenerate pins, which is exhaustive:
/// a child can flip to contained only if its parent is unresolved.
///
/// Returns, per cell, the ids of degenerate (lo = 0) annuli whose
/// excluded center the cell owns; downstream subproblem construction
/// treats those as unresolved at the cell.
pub fn compute_contained_annuli(
    cutting: &mut HierarchicalCutting,
    annuli: &[Annulus],
) -> Vec<Vec<u32>> {
    for cell in &mut cutting.cells {
        cell.contained_a.clear();
    }
    let mut pins: Vec<Vec<u32>> = vec![Vec::new(); cutting.cells.len()];
    let mut annulus_index: HashMap<u32, usize> = HashMap::new();
    for (i, a) in annuli.iter().enumerate() {
        annulus_index.insert(a.id, i);
        if a.interval.lo() == 0.0 && !a.interval.is_empty() {
            for cell in locate_path(cutting, a.center) {
                pins[cell as usize].push(a.id);
            }
        }
    }
    for level in 1..cutting.levels.len() {
        let parents = cutting.levels[level - 1].clone();
        for parent in parents {
            let mut cand: Vec<u32> = Vec::new();
            for &cid in &cutting.cells[parent as usize].conflict {
                cand.push(cutting.circles[cid as usize].owner);
            }
            for &cid in cutting.top_riders(parent) {
                cand.push(cutting.circles[cid as usize].owner);
            }
            cand.extend_from_slice(&pins[parent as usize]);
            cand.sort_unstable();
            cand.dedup();
            cand.retain(|id| annulus_index.contains_key(id));
            let children = cutting.cells[parent as usize].children.clone();
            for &owner in &cand {
                let annulus = &annuli[annulus_index[&owner]];
                if cutting.certified_at_or_above(parent, owner) {
                    continue;
                }
                for &child in &children {
                    if annulus_contains_cell(cutting, annulus, child) {
                        cutting.cells[child as usize].contained_a.push(owner);
                    }
                }
            }
        }
    }
    // Candidate lists were sorted, so each contained_a is sorted.
    pins
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PointSet;
    use rand::SeedableRng;

    fn circle(x: f64, y: f64, sq_r: f64, owner: u32) -> BoundaryCircle {
        BoundaryCircle::new(Point::new(x, y), sq_r, owner, CircleSide::Outer).unwrap()
    }

    #[test]
    fn empty_circle_set_gives_single_root() {
        let mut rng = Rng::seed_from_u64(0);
        let cut =
            build_hierarchical_cutting(Vec::new(), 1.0, 2.0, &Config::default(), &mut rng).unwrap();
        assert_eq!(cut.num_levels(), 1);
        assert_eq!(cut.num_cells(), 1);
        assert!(cut.cell(cut.root()).conflict.is_empty());
    }

    #[test]
    fn concentric_circles_r1_single_level() {
        let mut rng = Rng::seed_from_u64(0);
        let circles = vec![circle(0.0, 0.0, 1.0, 0), circle(0.0, 0.0, 4.0, 1)];
        let cut =
            build_hierarchical_cutting(circles, 1.0, 2.0, &Config::default(), &mut rng).unwrap();
        assert_eq!(cut.num_levels(), 1);
        assert_eq!(cut.cell(cut.root()).conflict, vec![0, 1]);
    }

    #[test]
    fn point_vs_arc_exact_on_circle() {
        let c = circle(0.0, 0.0, 25.0, 0);
        // (3,4) is exactly on the circle, above center: on the upper arc.
        assert_eq!(point_vs_arc(Point::new(3.0, 4.0), &c, true), Ordering::Equal);
        assert_eq!(point_vs_arc(Point::new(3.0, 4.0), &c, false), Ordering::Greater);
        assert_eq!(point_vs_arc(Point::new(3.0, -4.0), &c, false), Ordering::Equal);
        assert_eq!(point_vs_arc(Point::new(0.0, 0.0), &c, true), Ordering::Less);
        assert_eq!(point_vs_arc(Point::new(0.0, 6.0), &c, true), Ordering::Greater);
    }

    #[test]
    fn circle_intersections_basic() {
        let a = circle(0.0, 0.0, 1.0, 0);
        let b = circle(1.0, 0.0, 1.0, 1);
        let pts = circle_intersections(&a, &b);
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert!((sq_dist(p, a.center) - 1.0).abs() < 1e-12);
            assert!((sq_dist(p, b.center) - 1.0).abs() < 1e-12);
        }
        let c = circle(5.0, 0.0, 1.0, 2);
        assert!(circle_intersections(&a, &c).is_empty());
    }

    #[test]
    fn location_tiles_every_level() {
        let mut rng = Rng::seed_from_u64(7);
        let mut circles = Vec::new();
        for i in 0..40 {
            let x = (i as f64 * 0.37).sin() * 3.0;
            let y = (i as f64 * 0.61).cos() * 3.0;
            circles.push(circle(x, y, 1.0 + (i % 5) as f64 * 0.3, i));
        }
        let mut cut =
            build_hierarchical_cutting(circles, 4.0, 2.0, &Config::default(), &mut rng).unwrap();
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let t = i as f64;
                ((t * 0.713).sin() * 4.0, (t * 0.291).cos() * 4.0)
            })
            .collect();
        let ps = PointSet::from_coords(&pts).unwrap();
        locate_points(&mut cut, &ps, true);
        // Each point appears once per level.
        let total: usize = cut.cells.iter().map(|c| c.canonical_b.len()).sum();
        assert_eq!(total, ps.len() * cut.num_levels());
        for level in 0..cut.num_levels() {
            let mut seen = vec![0u32; ps.len()];
            for &cell in cut.level_cells(level) {
                for &p in &cut.cell(cell).canonical_b {
                    seen[p as usize] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "level {level} not a tiling");
        }
    }

    #[test]
    fn conflict_lists_shrink_within_bounds() {
        let mut rng = Rng::seed_from_u64(3);
        let mut circles = Vec::new();
        for i in 0..200u32 {
            let x = ((i as f64) * 0.7311).fract() * 10.0;
            let y = ((i as f64) * 0.2917).fract() * 10.0;
            circles.push(circle(x, y, 1.0, i));
        }
        let cfg = Config::default();
        let cut = build_hierarchical_cutting(circles, 8.0, 2.0, &cfg, &mut rng).unwrap();
        assert_eq!(cut.num_levels(), 4); // ceil(log2 8) = 3 levels beyond root
        for level in 1..cut.num_levels() {
            let bound = cfg.slack * 200.0 / 2.0f64.powi(level as i32);
            for &cell in cut.level_cells(level) {
                assert!(
                    cut.cell(cell).conflict.len() as f64 <= bound,
                    "level {level} cell over bound"
                );
            }
        }
    }

    #[test]
    fn child_conflicts_subset_of_parent() {
        let mut rng = Rng::seed_from_u64(11);
        let mut circles = Vec::new();
        for i in 0..80u32 {
            let x = ((i as f64) * 0.391).fract() * 6.0;
            let y = ((i as f64) * 0.577).fract() * 6.0;
            circles.push(circle(x, y, 0.8, i));
        }
        let cut =
            build_hierarchical_cutting(circles, 6.0, 2.0, &Config::default(), &mut rng).unwrap();
        for cell in &cut.cells {
            if let Some(parent) = cell.parent {
                let pc = &cut.cell(parent).conflict;
                for c in &cell.conflict {
                    assert!(pc.binary_search(c).is_ok());
                }
            }
        }
    }
}
