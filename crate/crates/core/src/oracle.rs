//! Independent brute-force reference implementations.
//!
//! Everything here is deliberately naive and shares nothing with the main
//! algorithms beyond the primitive types in [`crate::geom`] (plus the
//! range-search output type, whose fields the checker reads). Tests freeze
//! expected values computed by these oracles and compare the real
//! implementations against them.

use crate::brs::BrsOutput;
use crate::error::Error;
use crate::geom::{sq_dist, Point, PointSequence, PointSet, SqInterval};
use crate::udg::RspInstance;
use crate::Result;

/// k-th smallest squared pairwise distance of one set (1-indexed, multiset
/// semantics) by sorting all pairs.
pub fn brute_kth(points: &PointSet, k: u64) -> Result<f64> {
    let max = points.unordered_pairs();
    if k == 0 || k > max {
        return Err(Error::RankOutOfRange { k, max });
    }
    let pts = points.as_slice();
    let mut vals = Vec::with_capacity(max as usize);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            vals.push(sq_dist(pts[i], pts[j]));
        }
    }
    let idx = (k - 1) as usize;
    let (_, v, _) = vals.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*v)
}

/// k-th smallest squared cross distance of a bipartite instance.
pub fn brute_kth_cross(a: &PointSet, b: &PointSet, k: u64) -> Result<f64> {
    let max = a.len() as u64 * b.len() as u64;
    if k == 0 || k > max {
        return Err(Error::RankOutOfRange { k, max });
    }
    let mut vals = Vec::with_capacity(max as usize);
    for p in a.iter() {
        for q in b.iter() {
            vals.push(sq_dist(p, q));
        }
    }
    let idx = (k - 1) as usize;
    let (_, v, _) = vals.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*v)
}

/// Smallest squared cross distance `v` of `A x B` with `decision(v)` true,
/// by ascending linear sweep over the full multiset.
pub fn brute_min_feasible(
    a: &PointSet,
    b: &PointSet,
    mut decision: impl FnMut(f64) -> bool,
) -> Result<f64> {
    let mut vals = Vec::with_capacity(a.len() * b.len());
    for p in a.iter() {
        for q in b.iter() {
            vals.push(sq_dist(p, q));
        }
    }
    vals.sort_unstable_by(f64::total_cmp);
    vals.dedup();
    for v in vals {
        if decision(v) {
            return Ok(v);
        }
    }
    Err(Error::NoFeasibleValue)
}

/// Smallest squared distance between two distinct points of `P` with
/// `decision` true, ascending sweep.
pub fn brute_min_feasible_self(
    points: &PointSet,
    mut decision: impl FnMut(f64) -> bool,
) -> Result<f64> {
    let pts = points.as_slice();
    let mut vals = Vec::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            vals.push(sq_dist(pts[i], pts[j]));
        }
    }
    vals.sort_unstable_by(f64::total_cmp);
    vals.dedup();
    for v in vals {
        if decision(v) {
            return Ok(v);
        }
    }
    Err(Error::NoFeasibleValue)
}

/// Outcome of [`brute_brs_check`]: either all three range-search output
/// conditions hold, or a counterexample pair with the reason.
#[derive(Debug, Clone, PartialEq)]
pub enum BrsCheck {
    Ok,
    /// A certified pair whose distance is outside the query interval.
    OutOfRangeCertified { a: u32, b: u32, sq: f64 },
    /// An ordered pair covered by more than one output graph.
    DuplicatePair { a: u32, b: u32 },
    /// An in-range ordered pair covered by no output graph.
    MissedPair { a: u32, b: u32, sq: f64 },
}

/// Exhaustively verifies a range-search output against its contract:
/// every certified pair is in range, every in-range ordered pair of
/// `A x B` is covered exactly once by certified-union-uncertain, and no
/// ordered pair is covered twice. Intended for |A|*|B| up to ~10^6.
pub fn brute_brs_check(
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
    out: &BrsOutput,
) -> BrsCheck {
    let m = a.len();
    let n = b.len();
    let mut cover = vec![0u8; m * n];
    for biclique in &out.gamma {
        for &ai in &biclique.a_side {
            for &bi in &biclique.b_side {
                let sq = sq_dist(a.get(ai), b.get(bi));
                if !interval.contains(sq) {
                    return BrsCheck::OutOfRangeCertified { a: ai, b: bi, sq };
                }
                let slot = &mut cover[ai as usize * n + bi as usize];
                if *slot > 0 {
                    return BrsCheck::DuplicatePair { a: ai, b: bi };
                }
                *slot = 1;
            }
        }
    }
    for biclique in &out.pi {
        for &ai in &biclique.a_side {
            for &bi in &biclique.b_side {
                let slot = &mut cover[ai as usize * n + bi as usize];
                if *slot > 0 {
                    return BrsCheck::DuplicatePair { a: ai, b: bi };
                }
                *slot = 1;
            }
        }
    }
    for ai in 0..m {
        for bi in 0..n {
            let sq = sq_dist(a.get(ai as u32), b.get(bi as u32));
            if interval.contains(sq) && cover[ai * n + bi] == 0 {
                return BrsCheck::MissedPair {
                    a: ai as u32,
                    b: bi as u32,
                    sq,
                };
            }
        }
    }
    BrsCheck::Ok
}

fn within(a: Point, b: Point, sq_delta: f64) -> bool {
    sq_dist(a, b) <= sq_delta
}

/// Two-sided shortcut reachability at threshold `sq_delta` by explicit
/// breadth-first search over states (i, j); per move one frog jumps
/// forward by any positive amount and every visited state must be within
/// the threshold.
pub fn brute_dfd2_decide(a: &PointSequence, b: &PointSequence, sq_delta: f64) -> bool {
    let m = a.len();
    let n = b.len();
    if m == 0 || n == 0 {
        return false;
    }
    if !within(a.get(0), b.get(0), sq_delta) {
        return false;
    }
    let mut seen = vec![false; m * n];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back((0usize, 0usize));
    while let Some((i, j)) = queue.pop_front() {
        if i == m - 1 && j == n - 1 {
            return true;
        }
        for i2 in (i + 1)..m {
            if !seen[i2 * n + j] && within(a.get(i2), b.get(j), sq_delta) {
                seen[i2 * n + j] = true;
                queue.push_back((i2, j));
            }
        }
        for j2 in (j + 1)..n {
            if !seen[i * n + j2] && within(a.get(i), b.get(j2), sq_delta) {
                seen[i * n + j2] = true;
                queue.push_back((i, j2));
            }
        }
    }
    false
}

/// One-sided shortcut reachability: the A-frog may jump forward by any
/// amount, the B-frog visits every point in order (single steps).
pub fn brute_dfd1_decide(a: &PointSequence, b: &PointSequence, sq_delta: f64) -> bool {
    let m = a.len();
    let n = b.len();
    if m == 0 || n == 0 {
        return false;
    }
    if !within(a.get(0), b.get(0), sq_delta) {
        return false;
    }
    let mut seen = vec![false; m * n];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back((0usize, 0usize));
    while let Some((i, j)) = queue.pop_front() {
        if i == m - 1 && j == n - 1 {
            return true;
        }
        for i2 in (i + 1)..m {
            if !seen[i2 * n + j] && within(a.get(i2), b.get(j), sq_delta) {
                seen[i2 * n + j] = true;
                queue.push_back((i2, j));
            }
        }
        if j + 1 < n && !seen[i * n + j + 1] && within(a.get(i), b.get(j + 1), sq_delta) {
            seen[i * n + j + 1] = true;
            queue.push_back((i, j + 1));
        }
    }
    false
}

fn cross_values(a: &PointSequence, b: &PointSequence) -> Vec<f64> {
    let mut vals = Vec::with_capacity(a.len() * b.len());
    for p in a.as_slice() {
        for q in b.as_slice() {
            vals.push(sq_dist(*p, *q));
        }
    }
    vals.sort_unstable_by(f64::total_cmp);
    vals.dedup();
    vals
}

fn min_true(vals: &[f64], mut decide: impl FnMut(f64) -> bool) -> Result<f64> {
    // Reachability at a threshold is monotone (larger thresholds only add
    // edges), so binary search over the sorted distinct values is exact.
    if vals.is_empty() {
        return Err(Error::NoFeasibleValue);
    }
    if !decide(vals[vals.len() - 1]) {
        return Err(Error::NoFeasibleValue);
    }
    let mut lo = 0usize;
    let mut hi = vals.len() - 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if decide(vals[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(vals[lo])
}

/// Two-sided shortcut distance by brute search over realized thresholds.
pub fn brute_dfd2(a: &PointSequence, b: &PointSequence) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCollection("sequence"));
    }
    let vals = cross_values(a, b);
    min_true(&vals, |v| brute_dfd2_decide(a, b, v))
}

/// One-sided shortcut distance by brute search over realized thresholds.
pub fn brute_dfd1(a: &PointSequence, b: &PointSequence) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCollection("sequence"));
    }
    let vals = cross_values(a, b);
    min_true(&vals, |v| brute_dfd1_decide(a, b, v))
}

/// Classic discrete Frechet distance (no shortcuts), squared, by the
/// standard dynamic program. Used as an upper-bound sandwich in tests.
pub fn classic_dfd_sq(a: &PointSequence, b: &PointSequence) -> f64 {
    let m = a.len();
    let n = b.len();
    assert!(m > 0 && n > 0);
    let mut prev = vec![0.0f64; n];
    let mut cur = vec![0.0f64; n];
    for i in 0..m {
        for j in 0..n {
            let d = sq_dist(a.get(i), b.get(j));
            let best = if i == 0 && j == 0 {
                0.0
            } else if i == 0 {
                cur[j - 1]
            } else if j == 0 {
                prev[j]
            } else {
                prev[j].min(prev[j - 1]).min(cur[j - 1])
            };
            cur[j] = d.max(best);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n - 1]
}

/// Hop-or-length-bounded s-t reachability at threshold `sq_delta` on the
/// explicit unit-disk graph (adjacency by full scan).
pub fn brute_rsp_decide(inst: &RspInstance, sq_delta: f64) -> bool {
    let pts = inst.points.as_slice();
    let n = pts.len();
    let s = inst.s as usize;
    let t = inst.t as usize;
    if inst.weighted {
        // Dijkstra with Euclidean edge weights, budget lambda.
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        dist[s] = 0.0;
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..n {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX || best > inst.lambda {
                break;
            }
            if u == t {
                return true;
            }
            done[u] = true;
            for v in 0..n {
                if !done[v] {
                    let sq = sq_dist(pts[u], pts[v]);
                    if sq <= sq_delta {
                        let nd = dist[u] + sq.sqrt();
                        if nd < dist[v] {
                            dist[v] = nd;
                        }
                    }
                }
            }
        }
        dist[t] <= inst.lambda
    } else {
        let budget = inst.lambda.floor() as u64;
        let mut hops = vec![u64::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        hops[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if hops[u] >= budget {
                continue;
            }
            for v in 0..n {
                if hops[v] == u64::MAX && sq_dist(pts[u], pts[v]) <= sq_delta {
                    hops[v] = hops[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        hops[t] <= budget
    }
}

/// Reverse shortest path oracle: smallest realized squared distance whose
/// unit-disk graph admits an s-t path within the budget.
pub fn brute_rsp(inst: &RspInstance) -> Result<f64> {
    let pts = inst.points.as_slice();
    let mut vals = Vec::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            vals.push(sq_dist(pts[i], pts[j]));
        }
    }
    vals.sort_unstable_by(f64::total_cmp);
    vals.dedup();
    min_true(&vals, |v| brute_rsp_decide(inst, v))
}
