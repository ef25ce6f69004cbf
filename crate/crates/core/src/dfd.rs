//! Discrete Fréchet distance for two polygonal chains whose walkers
//! may jump forward over vertices, in two flavors: both chains may
//! jump, or only the first one.
//!
//! The distance is the least leash length (reported squared) for which
//! a valid traversal exists: both walkers start on the first vertices,
//! end on the last, move only forward, one at a time, and stay within
//! the leash at every stop.

use crate::config::{safe_log2, Config};
use crate::framework::{
    optimize_deterministic_report, optimize_randomized_report, OptReport,
};
use crate::geom::{sq_dist, PointSequence, Rng};
use crate::Result;

/// A pair of nonempty vertex chains.
#[derive(Debug, Clone)]
pub struct DfdInstance {
    pub a_seq: PointSequence,
    pub b_seq: PointSequence,
}

impl DfdInstance {
    pub fn new(a_seq: PointSequence, b_seq: PointSequence) -> Result<Self> {
        if a_seq.is_empty() || b_seq.is_empty() {
            return Err(crate::error::Error::EmptyCollection("chain"));
        }
        Ok(DfdInstance { a_seq, b_seq })
    }
}

/// Can both-jump walkers traverse within squared leash `sq_delta`?
///
/// A position (i, j) is reachable if its vertices are within leash and
/// some earlier position in the same row or column is reachable; the
/// prefix-or sweep keeps this linear in the grid size.
pub fn dfd2_decide(inst: &DfdInstance, sq_delta: f64) -> bool {
    let a = inst.a_seq.as_slice();
    let b = inst.b_seq.as_slice();
    let m = a.len();
    let n = b.len();
    // col_any[j]: some reachable (i', j) with i' < current i.
    let mut col_any = vec![false; n];
    let mut last_reach = false;
    for i in 0..m {
        // row_any: some reachable (i, j') with j' < current j.
        let mut row_any = false;
        for j in 0..n {
            let within = sq_dist(a[i], b[j]) <= sq_delta;
            let reach = within && ((i == 0 && j == 0) || row_any || col_any[j]);
            row_any |= reach;
            col_any[j] |= reach;
            if i + 1 == m && j + 1 == n {
                last_reach = reach;
            }
        }
    }
    last_reach
}

/// Least squared leash admitting a both-jump traversal.
pub fn dfd2(inst: &DfdInstance, cfg: &Config, rng: &mut Rng) -> Result<f64> {
    dfd2_report(inst, cfg, rng).map(|r| r.value)
}

/// As [`dfd2`], with diagnostics.
pub fn dfd2_report(inst: &DfdInstance, cfg: &Config, rng: &mut Rng) -> Result<OptReport> {
    let a = inst.a_seq.to_point_set();
    let b = inst.b_seq.to_point_set();
    let mut decision = |sq: f64| dfd2_decide(inst, sq);
    optimize_deterministic_report(&a, &b, &mut decision, cfg, rng)
}

/// Can a traversal where only the first chain's walker jumps (the
/// second visits every vertex in order) stay within `sq_delta`?
///
/// Greedy: hold the first walker as far back as possible; advance it
/// only when the next second-chain vertex is out of leash. A jump
/// happens while the second walker still sits on its current vertex,
/// so the landing vertex must be in leash with both that vertex and
/// the next one. The set of admissible walker positions at any column
/// is an up-closed-by-jump set determined by its minimum, which makes
/// tracking the minimum exact.
pub fn dfd1_decide(inst: &DfdInstance, sq_delta: f64) -> bool {
    let a = inst.a_seq.as_slice();
    let b = inst.b_seq.as_slice();
    let m = a.len();
    let n = b.len();
    if sq_dist(a[0], b[0]) > sq_delta {
        return false;
    }
    let mut i = 0usize;
    for j in 1..n {
        if sq_dist(a[i], b[j]) <= sq_delta {
            continue;
        }
        let hop = (i + 1..m).find(|&i2| {
            sq_dist(a[i2], b[j - 1]) <= sq_delta && sq_dist(a[i2], b[j]) <= sq_delta
        });
        match hop {
            Some(i2) => i = i2,
            None => return false,
        }
    }
    sq_dist(a[m - 1], b[n - 1]) <= sq_delta
}

/// Least squared leash admitting a first-chain-jumps traversal.
pub fn dfd1(inst: &DfdInstance, cfg: &Config, rng: &mut Rng) -> Result<f64> {
    dfd1_report(inst, cfg, rng).map(|r| r.value)
}

/// As [`dfd1`], with diagnostics.
pub fn dfd1_report(inst: &DfdInstance, cfg: &Config, rng: &mut Rng) -> Result<OptReport> {
    let a = inst.a_seq.to_point_set();
    let b = inst.b_seq.to_point_set();
    let total = (a.len() + b.len()) as f64;
    let l = total.powf(0.4) * safe_log2(total).powf(1.8);
    let mut decision = |sq: f64| dfd1_decide(inst, sq);
    optimize_randomized_report(&a, &b, l, &mut decision, cfg, rng)
}
