//! Distance selection: the k-th smallest interpoint distance of a point
//! set (and the bipartite cross variant), found by staged interval
//! narrowing instead of materializing all pairs.
//!
//! Each stage runs a batched range search on the current interval. If
//! the certified mass is small enough the stage finishes by exact
//! rank selection inside the interval; otherwise sparse expander
//! graphs are sampled over the certified bicliques, their edge values
//! are grouped into weight-balanced buckets, and a binary search over
//! bucket boundaries with the rank decision shrinks the interval.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;

use crate::brs::{complete_brs, partial_brs_selfjoin, stage_brs_bipartite, Biclique, BrsOutput};
use crate::config::{safe_log2, Config, CountStrategy};
use crate::error::Error;
use crate::geom::{
    coincident_cross_pairs, coincident_pairs, sq_dist, Point, PointSet, Rng, SqInterval,
};
use crate::Result;

/// Number of unordered pairs of `p` at squared distance `<= sq_delta`.
///
/// All three strategies return identical counts; they differ only in
/// cost profile. `Brute` scans all pairs, `Grid` buckets points into
/// cells of the query width and scans 3x3 neighborhoods, `Brs` counts
/// certified edges of a complete search over `(0, sq_delta]` plus
/// coincident pairs.
pub fn count_pairs_at_most(
    p: &PointSet,
    sq_delta: f64,
    strategy: CountStrategy,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<u64> {
    if !(sq_delta >= 0.0) {
        return Err(Error::InvalidInterval(0.0, sq_delta));
    }
    match strategy {
        CountStrategy::Brute => {
            let pts = p.as_slice();
            let mut count = 0u64;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    if sq_dist(pts[i], pts[j]) <= sq_delta {
                        count += 1;
                    }
                }
            }
            Ok(count)
        }
        CountStrategy::Grid => Ok(grid_count(p, sq_delta)),
        CountStrategy::Brs => {
            let interval = SqInterval::new(0.0, sq_delta)?;
            let out = complete_brs(p, p, interval, cfg, rng, false)?;
            // Ordered coverage counts each unordered in-range pair twice.
            Ok(out.gamma_edges() / 2 + coincident_pairs(p))
        }
    }
}

fn grid_count(p: &PointSet, sq_delta: f64) -> u64 {
    if sq_delta == 0.0 {
        return coincident_pairs(p);
    }
    let width = sq_delta.sqrt();
    let cell_of = |pt: Point| -> (i64, i64) {
        ((pt.x / width).floor() as i64, (pt.y / width).floor() as i64)
    };
    let mut cells: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    let mut count = 0u64;
    for (i, &pt) in p.as_slice().iter().enumerate() {
        let (cx, cy) = cell_of(pt);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = cells.get(&(cx + dx, cy + dy)) {
                    for &j in ids {
                        if sq_dist(pt, p.get(j)) <= sq_delta {
                            count += 1;
                        }
                    }
                }
            }
        }
        cells.entry((cx, cy)).or_default().push(i as u32);
    }
    count
}

/// Rank decision: does `p` have at least `k` unordered pairs at squared
/// distance `<= sq_delta`? Monotone in `sq_delta`.
pub fn decide_rank(
    p: &PointSet,
    k: u64,
    sq_delta: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<bool> {
    Ok(count_pairs_at_most(p, sq_delta, cfg.count_strategy, cfg, rng)? >= k)
}

/// A candidate boundary value with the sampling weight of the biclique
/// chunk that produced it.
#[derive(Debug, Clone, Copy)]
pub struct WeightedCandidate {
    pub value: f64,
    pub weight: f64,
}

/// Sparse candidate generation over certified bicliques.
///
/// Each biclique is oriented so the larger side is chunked into pieces
/// the size of the smaller side (the last piece absorbs a short tail).
/// On each chunk's vertex set, `degree/2` uniform Hamiltonian cycles
/// give a `degree`-regular multigraph whose cross edges become
/// candidates, deduplicated within the chunk. Cycles (not arbitrary
/// permutation unions) guarantee every vertex actually carries edges,
/// so even a 1x1 biclique always emits its pair.
pub fn build_expander_candidates(
    gamma: &[Biclique],
    a: &PointSet,
    b: &PointSet,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<Vec<WeightedCandidate>> {
    let degree = cfg.expander_degree.max(2);
    let half = (degree / 2).max(1);
    let mut out = Vec::new();
    for bic in gamma {
        if bic.a_side.is_empty() || bic.b_side.is_empty() {
            continue;
        }
        // Orient: `long` is chunked, `short` rides along whole.
        let (long, short, a_is_long) = if bic.a_side.len() >= bic.b_side.len() {
            (&bic.a_side, &bic.b_side, true)
        } else {
            (&bic.b_side, &bic.a_side, false)
        };
        let s = short.len();
        let g = (long.len() / s).max(1);
        let base = long.len() / g;
        let mut start = 0usize;
        for chunk_idx in 0..g {
            let end = if chunk_idx + 1 == g {
                long.len()
            } else {
                start + base
            };
            let chunk = &long[start..end];
            start = end;
            let weight = chunk.len() as f64 * s as f64 / (chunk.len() + s) as f64;
            if chunk.len() == 1 && s == 1 {
                // Degenerate chunk: the multigraph has one cross edge,
                // so emit it directly without sampling machinery.
                let (ai, bi) = if a_is_long {
                    (chunk[0], short[0])
                } else {
                    (short[0], chunk[0])
                };
                out.push(WeightedCandidate {
                    value: sq_dist(a.get(ai), b.get(bi)),
                    weight,
                });
                continue;
            }
            // Vertices: chunk entries first, then the short side.
            let total = chunk.len() + s;
            let mut seen: HashSet<(u32, u32)> = HashSet::new();
            let mut order: Vec<usize> = (0..total).collect();
            for _ in 0..half {
                order.shuffle(rng);
                for w in 0..total {
                    let u = order[w];
                    let v = order[(w + 1) % total];
                    // Cross edges only: one endpoint in the chunk, one
                    // in the short side.
                    let (ci, si) = if u < chunk.len() && v >= chunk.len() {
                        (u, v - chunk.len())
                    } else if v < chunk.len() && u >= chunk.len() {
                        (v, u - chunk.len())
                    } else {
                        continue;
                    };
                    let (ai, bi) = if a_is_long {
                        (chunk[ci], short[si])
                    } else {
                        (short[si], chunk[ci])
                    };
                    if seen.insert((ai, bi)) {
                        out.push(WeightedCandidate {
                            value: sq_dist(a.get(ai), b.get(bi)),
                            weight,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Group candidates (sorted by value) into buckets of total weight at
/// most `mass/2`, greedily: a bucket closes when the next candidate
/// would push it past the cap. Returns the strictly increasing list of
/// bucket-boundary values (each bucket's largest value).
///
/// Errors with `WeightBoundViolated` if any single candidate weighs
/// more than `mass/4` (then two buckets are not guaranteed to cover
/// the cap structure the narrowing argument needs).
pub fn weighted_interval_partition(
    candidates: &[WeightedCandidate],
    mass: f64,
) -> Result<Vec<f64>> {
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let bound = mass / 4.0;
    for c in candidates {
        if c.weight > bound {
            return Err(Error::WeightBoundViolated {
                weight: c.weight,
                bound,
            });
        }
    }
    let mut sorted: Vec<WeightedCandidate> = candidates.to_vec();
    sorted.sort_by(|x, y| x.value.total_cmp(&y.value));
    let cap = mass / 2.0;
    let mut boundaries = Vec::new();
    let mut acc = 0.0f64;
    let mut last_value = sorted[0].value;
    for c in &sorted {
        if acc > 0.0 && acc + c.weight > cap {
            boundaries.push(last_value);
            acc = 0.0;
        }
        acc += c.weight;
        last_value = c.value;
    }
    boundaries.push(last_value);
    boundaries.dedup_by(|x, y| x == y);
    Ok(boundaries)
}

/// Outcome of a selection run, with per-stage diagnostics.
#[derive(Debug, Clone)]
pub struct SelectReport {
    pub value: f64,
    pub stages: u32,
    pub decision_calls: u64,
    /// Interval in force at the start of each stage after the first.
    pub stage_intervals: Vec<SqInterval>,
    pub gamma_edges: u64,
    pub pi_pairs: u64,
    /// True if the stage guard tripped and the answer came from the
    /// quadratic fallback enumeration.
    pub fallback: bool,
}

/// k-th smallest squared distance over unordered pairs of `p`.
pub fn select_distance(p: &PointSet, k: u64, cfg: &Config, rng: &mut Rng) -> Result<f64> {
    select_distance_report(p, k, cfg, rng).map(|r| r.value)
}

/// As [`select_distance`], with stage diagnostics.
pub fn select_distance_report(
    p: &PointSet,
    k: u64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<SelectReport> {
    let n = p.len();
    let max_k = p.unordered_pairs();
    if k < 1 || k > max_k {
        return Err(Error::RankOutOfRange { k, max: max_k });
    }
    let mut report = SelectReport {
        value: 0.0,
        stages: 0,
        decision_calls: 0,
        stage_intervals: Vec::new(),
        gamma_edges: 0,
        pi_pairs: 0,
        fallback: false,
    };
    if coincident_pairs(p) >= k {
        return Ok(report);
    }
    let nf = n as f64;
    let guard = (cfg.c_guard * safe_log2(nf)).ceil() as u32;
    let threshold = cfg.c_thresh * nf.powf(4.0 / 3.0) * safe_log2(nf);
    let mut interval = SqInterval::everything();
    loop {
        report.stages += 1;
        if report.stages > guard {
            report.fallback = true;
            report.value = brute_select_self(p, k);
            return Ok(report);
        }
        let out = if interval.hi().is_finite() {
            partial_brs_selfjoin(p, interval, cfg, rng)?
        } else {
            // Unbounded stage: nothing certifiable; the whole square
            // acts as the candidate source.
            let ids: Vec<u32> = (0..n as u32).collect();
            BrsOutput {
                interval,
                gamma: vec![Biclique {
                    a_side: ids.clone(),
                    b_side: ids,
                }],
                pi: Vec::new(),
            }
        };
        let m_stage = if interval.hi().is_finite() {
            out.gamma_edges()
        } else {
            // Ordered pairs of distinct indices.
            (n as u64) * (n as u64 - 1)
        };
        report.gamma_edges = out.gamma_edges();
        report.pi_pairs = out.pi_pairs();
        if (m_stage as f64) <= threshold {
            // Final stage: exact rank selection inside the interval.
            let k_alpha =
                count_pairs_at_most(p, interval.lo(), cfg.count_strategy, cfg, rng)?;
            report.decision_calls += 1;
            if k_alpha >= k {
                report.fallback = true;
                report.value = brute_select_self(p, k);
                return Ok(report);
            }
            let mut vals = Vec::new();
            collect_unordered_in_range(&out, p, interval, &mut vals);
            let idx = (k - k_alpha) as usize - 1;
            if idx >= vals.len() {
                // Interval invariant violated; fall back rather than
                // return garbage.
                report.fallback = true;
                report.value = brute_select_self(p, k);
                return Ok(report);
            }
            let (_, v, _) = vals.select_nth_unstable_by(idx, f64::total_cmp);
            report.value = *v;
            return Ok(report);
        }
        // Narrowing stage.
        let cands = build_expander_candidates(&out.gamma, p, p, cfg, rng)?;
        let cands: Vec<WeightedCandidate> = cands
            .into_iter()
            .filter(|c| interval.contains(c.value))
            .collect();
        if cands.is_empty() {
            // Nothing to narrow with this round; the guard bounds the
            // number of retries (fresh randomness each time).
            continue;
        }
        let boundaries = weighted_interval_partition(&cands, m_stage as f64)?;
        let mut calls = 0u64;
        let cut = first_true_index(&boundaries, &mut calls, |v| {
            decide_rank(p, k, v, cfg, rng)
        })?;
        report.decision_calls += calls;
        interval = narrowed(interval, &boundaries, cut)?;
        report.stage_intervals.push(interval);
    }
}

/// k-th smallest squared distance over cross pairs of `a` and `b`.
pub fn select_distance_bipartite(
    a: &PointSet,
    b: &PointSet,
    k: u64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<f64> {
    select_distance_bipartite_report(a, b, k, cfg, rng).map(|r| r.value)
}

/// As [`select_distance_bipartite`], with stage diagnostics.
pub fn select_distance_bipartite_report(
    a: &PointSet,
    b: &PointSet,
    k: u64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<SelectReport> {
    let m = a.len() as u64;
    let n = b.len() as u64;
    let max_k = m * n;
    if k < 1 || k > max_k {
        return Err(Error::RankOutOfRange { k, max: max_k });
    }
    let mut report = SelectReport {
        value: 0.0,
        stages: 0,
        decision_calls: 0,
        stage_intervals: Vec::new(),
        gamma_edges: 0,
        pi_pairs: 0,
        fallback: false,
    };
    if coincident_cross_pairs(a, b) >= k {
        return Ok(report);
    }
    let mf = m as f64;
    let nf = n as f64;
    let total = mf + nf;
    let guard = (cfg.c_guard * safe_log2(total)).ceil() as u32;
    let threshold = cfg.c_thresh
        * (mf.powf(2.0 / 3.0) * nf.powf(2.0 / 3.0) + mf * safe_log2(nf) + nf * safe_log2(mf))
        * safe_log2(total);
    let mut interval = SqInterval::everything();
    loop {
        report.stages += 1;
        if report.stages > guard {
            report.fallback = true;
            report.value = brute_select_cross(a, b, k);
            return Ok(report);
        }
        let out = stage_brs_bipartite(a, b, interval, cfg, rng)?;
        let m_stage = if interval.hi().is_finite() {
            out.gamma_edges()
        } else {
            m * n
        };
        report.gamma_edges = out.gamma_edges();
        report.pi_pairs = out.pi_pairs();
        if (m_stage as f64) <= threshold {
            let k_alpha = count_cross_at_most(a, b, interval.lo(), cfg, rng)?;
            report.decision_calls += 1;
            if k_alpha >= k {
                report.fallback = true;
                report.value = brute_select_cross(a, b, k);
                return Ok(report);
            }
            let mut vals = Vec::new();
            collect_cross_in_range(&out, a, b, interval, &mut vals);
            let idx = (k - k_alpha) as usize - 1;
            if idx >= vals.len() {
                report.fallback = true;
                report.value = brute_select_cross(a, b, k);
                return Ok(report);
            }
            let (_, v, _) = vals.select_nth_unstable_by(idx, f64::total_cmp);
            report.value = *v;
            return Ok(report);
        }
        let cands = build_expander_candidates(&out.gamma, a, b, cfg, rng)?;
        let cands: Vec<WeightedCandidate> = cands
            .into_iter()
            .filter(|c| interval.contains(c.value))
            .collect();
        if cands.is_empty() {
            continue;
        }
        let boundaries = weighted_interval_partition(&cands, m_stage as f64)?;
        let mut calls = 0u64;
        let cut = first_true_index(&boundaries, &mut calls, |v| {
            Ok(count_cross_at_most(a, b, v, cfg, rng)? >= k)
        })?;
        report.decision_calls += calls;
        interval = narrowed(interval, &boundaries, cut)?;
        report.stage_intervals.push(interval);
    }
}

/// Number of cross pairs of `a`, `b` at squared distance `<= sq_delta`.
pub fn count_cross_at_most(
    a: &PointSet,
    b: &PointSet,
    sq_delta: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<u64> {
    if !(sq_delta >= 0.0) {
        return Err(Error::InvalidInterval(0.0, sq_delta));
    }
    if sq_delta == 0.0 {
        return Ok(coincident_cross_pairs(a, b));
    }
    let interval = SqInterval::new(0.0, sq_delta)?;
    let out = complete_brs(a, b, interval, cfg, rng, false)?;
    Ok(out.gamma_edges() + coincident_cross_pairs(a, b))
}

/// Binary search for the first index of `values` where the monotone
/// decision is true; `None` if the decision is false everywhere.
pub(crate) fn first_true_index<F>(
    values: &[f64],
    calls: &mut u64,
    mut decide: F,
) -> Result<Option<usize>>
where
    F: FnMut(f64) -> Result<bool>,
{
    let mut lo = 0usize;
    let mut hi = values.len();
    // Invariant: decision false before lo, true at hi and beyond.
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        *calls += 1;
        if decide(values[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(if lo < values.len() { Some(lo) } else { None })
}

/// New interval after a boundary search: the first true boundary keeps
/// `(prev, b_i]`, no true boundary keeps `(b_last, hi]`.
pub(crate) fn narrowed(
    interval: SqInterval,
    boundaries: &[f64],
    cut: Option<usize>,
) -> Result<SqInterval> {
    match cut {
        Some(i) => {
            let lo = if i == 0 { interval.lo() } else { boundaries[i - 1] };
            SqInterval::new(lo, boundaries[i])
        }
        None => SqInterval::new(*boundaries.last().unwrap(), interval.hi()),
    }
}

fn collect_unordered_in_range(
    out: &BrsOutput,
    p: &PointSet,
    interval: SqInterval,
    vals: &mut Vec<f64>,
) {
    for bic in out.gamma.iter().chain(out.pi.iter()) {
        for &ai in &bic.a_side {
            let pa = p.get(ai);
            for &bi in &bic.b_side {
                if ai < bi {
                    let v = sq_dist(pa, p.get(bi));
                    if interval.contains(v) {
                        vals.push(v);
                    }
                }
            }
        }
    }
}

pub(crate) fn collect_cross_in_range(
    out: &BrsOutput,
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
    vals: &mut Vec<f64>,
) {
    for bic in out.gamma.iter().chain(out.pi.iter()) {
        for &ai in &bic.a_side {
            let pa = a.get(ai);
            for &bi in &bic.b_side {
                let v = sq_dist(pa, b.get(bi));
                if interval.contains(v) {
                    vals.push(v);
                }
            }
        }
    }
}

// Quadratic fallbacks, independent of the test oracles.

fn brute_select_self(p: &PointSet, k: u64) -> f64 {
    let pts = p.as_slice();
    let mut vals = Vec::with_capacity(pts.len() * (pts.len().saturating_sub(1)) / 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            vals.push(sq_dist(pts[i], pts[j]));
        }
    }
    let idx = (k - 1) as usize;
    let (_, v, _) = vals.select_nth_unstable_by(idx, f64::total_cmp);
    *v
}

fn brute_select_cross(a: &PointSet, b: &PointSet, k: u64) -> f64 {
    let mut vals = Vec::with_capacity(a.len() * b.len());
    for &pa in a.as_slice() {
        for &pb in b.as_slice() {
            vals.push(sq_dist(pa, pb));
        }
    }
    let idx = (k - 1) as usize;
    let (_, v, _) = vals.select_nth_unstable_by(idx, f64::total_cmp);
    *v
}
