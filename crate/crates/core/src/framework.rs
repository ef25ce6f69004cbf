//! Optimization drivers that turn a monotone yes/no decision over
//! squared distances into the exact optimal value, which is always a
//! realized cross distance of two point sets.
//!
//! The deterministic driver mirrors the staged selection loop: batched
//! range searches certify mass, expander candidates and a bucketed
//! binary search narrow the interval, and a final stage enumerates the
//! surviving candidates. The randomized driver first shrinks the
//! interval until few distances survive (cheap sampling tests verify
//! each shrink), then enumerates.

use crate::brs::{brs_for_L, stage_brs_bipartite, BrsOutput, UncertainSampler};
use crate::config::{safe_log2, Config};
use crate::error::Error;
use crate::geom::{sq_dist, PointSet, Rng, SqInterval};
use crate::selection::{
    build_expander_candidates, collect_cross_in_range, first_true_index, narrowed,
    weighted_interval_partition, WeightedCandidate,
};
use crate::Result;

/// Outcome of an optimization run, with diagnostics for reporting.
#[derive(Debug, Clone)]
pub struct OptReport {
    pub value: f64,
    pub stages: u32,
    pub decision_calls: u64,
    /// Certified / uncertain mass of the last search performed.
    pub gamma_edges: u64,
    pub pi_pairs: u64,
    /// Total shrink rounds, when the randomized driver ran.
    pub shrink_rounds: Option<u32>,
}

/// Result of one interval-shrinking run.
#[derive(Debug, Clone)]
pub struct ShrinkResult {
    /// Always contains the optimum (decisions are trusted monotone).
    pub interval: SqInterval,
    /// Claimed number of in-range distances on acceptance; infinite if
    /// the round cap expired without an accepted interval.
    pub claimed_l: f64,
    pub rounds: u32,
    pub decision_calls: u64,
    /// Set when the run ended without a verified acceptance.
    pub low_confidence: bool,
    /// Interval after each rejected (narrowing) round.
    pub rounds_trace: Vec<SqInterval>,
}

/// Least squared cross distance of `a`, `b` at which `decision` holds.
///
/// Requires `decision` monotone (false then true as the value grows)
/// and true at the largest cross distance; the optimum must be a
/// realized cross distance.
pub fn optimize_deterministic<F>(
    a: &PointSet,
    b: &PointSet,
    decision: &mut F,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<f64>
where
    F: FnMut(f64) -> bool,
{
    optimize_deterministic_report(a, b, decision, cfg, rng).map(|r| r.value)
}

/// As [`optimize_deterministic`], with stage diagnostics.
pub fn optimize_deterministic_report<F>(
    a: &PointSet,
    b: &PointSet,
    decision: &mut F,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<OptReport>
where
    F: FnMut(f64) -> bool,
{
    let mut report = OptReport {
        value: 0.0,
        stages: 0,
        decision_calls: 0,
        gamma_edges: 0,
        pi_pairs: 0,
        shrink_rounds: None,
    };
    report.decision_calls += 1;
    if decision(0.0) {
        return Ok(report);
    }
    let mf = a.len() as f64;
    let nf = b.len() as f64;
    let total = mf + nf;
    let guard = (cfg.c_guard * safe_log2(total)).ceil() as u32;
    let threshold = cfg.c_thresh
        * (mf.powf(2.0 / 3.0) * nf.powf(2.0 / 3.0) + mf * safe_log2(nf) + nf * safe_log2(mf))
        * safe_log2(total);
    let mut interval = SqInterval::everything();
    loop {
        report.stages += 1;
        if report.stages > guard {
            let v = brute_min_feasible_value(a, b, decision, &mut report.decision_calls)?;
            report.value = v;
            return Ok(report);
        }
        let out = stage_brs_bipartite(a, b, interval, cfg, rng)?;
        let m_stage = if interval.hi().is_finite() {
            out.gamma_edges()
        } else {
            a.len() as u64 * b.len() as u64
        };
        report.gamma_edges = out.gamma_edges();
        report.pi_pairs = out.pi_pairs();
        if (m_stage as f64) <= threshold {
            let mut vals = Vec::new();
            collect_cross_in_range(&out, a, b, interval, &mut vals);
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            let cut = first_true_index(&vals, &mut report.decision_calls, |v| Ok(decision(v)))?;
            return match cut {
                Some(i) => {
                    report.value = vals[i];
                    Ok(report)
                }
                None => Err(Error::NoFeasibleValue),
            };
        }
        let cands: Vec<WeightedCandidate> =
            build_expander_candidates(&out.gamma, a, b, cfg, rng)?
                .into_iter()
                .filter(|c| interval.contains(c.value))
                .collect();
        if cands.is_empty() {
            // Fresh randomness next stage; the guard bounds retries.
            continue;
        }
        let boundaries = weighted_interval_partition(&cands, m_stage as f64)?;
        let cut = first_true_index(&boundaries, &mut report.decision_calls, |v| {
            Ok(decision(v))
        })?;
        interval = narrowed(interval, &boundaries, cut)?;
    }
}

/// Shrink the search interval for the optimum of `decision` until at
/// most about `l` cross distances of `a`, `b` survive in it.
///
/// Proceeds in rounds: a budgeted range search records the interval's
/// pairs; a round accepts if everything recorded fits the budget, or
/// if the certified part is small and a sampling test estimates the
/// uncertain in-range mass under the budget. A rejected round narrows
/// the interval by binary search over sampled in-range values.
///
/// The returned interval always contains the optimum. `low_confidence`
/// flags runs that expired (round cap, or nothing left to sample)
/// without a verified acceptance.
pub fn shrink_interval<F>(
    a: &PointSet,
    b: &PointSet,
    l: f64,
    decision: &mut F,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<ShrinkResult>
where
    F: FnMut(f64) -> bool,
{
    let m = a.len() as u64;
    let n = b.len() as u64;
    let mn = (m * n) as f64;
    let l = l.clamp(1.0, mn.max(1.0));
    let total = (m + n) as f64;
    let cap = (cfg.c_rounds * safe_log2(total)).ceil().max(1.0) as u32;
    let mut interval = SqInterval::everything();
    let mut trace = Vec::new();
    let mut calls = 0u64;
    let mut rounds = 0u32;
    while rounds < cap {
        rounds += 1;
        let out = brs_for_L(a, b, interval, l, cfg, rng)?;
        let s1 = out.gamma_edges();
        let m_rec = out.pi_pairs();
        let tot_rec = s1 + m_rec;
        if (tot_rec as f64) <= l {
            // Everything recorded fits the budget outright.
            if !interval.hi().is_finite() {
                // Exact trim: every in-range value is recorded, so the
                // largest recorded value bounds the optimum above.
                if let Some(mx) = max_in_range_value(&out, a, b, interval) {
                    interval = SqInterval::new(interval.lo(), mx)?;
                }
            }
            return Ok(ShrinkResult {
                interval,
                claimed_l: tot_rec as f64,
                rounds,
                decision_calls: calls,
                low_confidence: false,
                rounds_trace: trace,
            });
        }
        if (s1 as f64) <= l / 2.0 && m_rec > 0 {
            let draws =
                (cfg.c2 * ((m_rec as f64) / l).max(1.0) * safe_log2(total)).ceil() as u64;
            let thresh = 0.75 * (l / 2.0) * (draws as f64) / (m_rec as f64);
            let sampler = UncertainSampler::new(&out)?;
            let mut successes = 0u64;
            let mut rejected = false;
            for _ in 0..draws {
                let (ai, bi) = sampler.draw(rng);
                if interval.contains(sq_dist(a.get(ai), b.get(bi))) {
                    successes += 1;
                    if (successes as f64) > thresh {
                        rejected = true;
                        break;
                    }
                }
            }
            if !rejected {
                let estimate = (successes as f64) * (m_rec as f64) / (draws.max(1) as f64);
                return Ok(ShrinkResult {
                    interval,
                    claimed_l: s1 as f64 + estimate,
                    rounds,
                    decision_calls: calls,
                    low_confidence: false,
                    rounds_trace: trace,
                });
            }
        }
        // Narrow: sample recorded values uniformly (certified values
        // are in range by construction; uncertain draws go through
        // rejection with a hard attempt budget).
        let want = (cfg.c_r * safe_log2(total)).ceil().max(1.0) as usize;
        let gamma_sampler = GammaSampler::new(&out);
        let pi_sampler = if m_rec > 0 {
            Some(UncertainSampler::new(&out)?)
        } else {
            None
        };
        let budget = (cfg.rejection_cap as u64).saturating_mul(want as u64);
        let mut attempts = 0u64;
        let mut values = Vec::with_capacity(want);
        while values.len() < want && attempts < budget {
            attempts += 1;
            use rand::Rng as _;
            let pick_gamma = match (&gamma_sampler, &pi_sampler) {
                (Some(_), Some(_)) => rng.gen_range(0..tot_rec) < s1,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_gamma {
                let (ai, bi) = gamma_sampler.as_ref().unwrap().draw(rng);
                values.push(sq_dist(a.get(ai), b.get(bi)));
            } else {
                let (ai, bi) = pi_sampler.as_ref().unwrap().draw(rng);
                let v = sq_dist(a.get(ai), b.get(bi));
                if interval.contains(v) {
                    values.push(v);
                }
            }
        }
        if values.len() < want {
            // Attempt budget burned on out-of-range uncertain pairs:
            // fall back to certified values alone.
            if let Some(gs) = &gamma_sampler {
                while values.len() < want {
                    let (ai, bi) = gs.draw(rng);
                    values.push(sq_dist(a.get(ai), b.get(bi)));
                }
            }
        }
        if values.is_empty() {
            // Nothing left to sample; the interval stands as final.
            return Ok(ShrinkResult {
                interval,
                claimed_l: tot_rec as f64,
                rounds,
                decision_calls: calls,
                low_confidence: true,
                rounds_trace: trace,
            });
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        let cut = first_true_index(&values, &mut calls, |v| Ok(decision(v)))?;
        interval = narrowed(interval, &values, cut)?;
        trace.push(interval);
    }
    Ok(ShrinkResult {
        interval,
        claimed_l: f64::INFINITY,
        rounds,
        decision_calls: calls,
        low_confidence: true,
        rounds_trace: trace,
    })
}

/// Least squared cross distance of `a`, `b` at which `decision` holds,
/// via interval shrinking with residual budget `l`.
///
/// Same contract as [`optimize_deterministic`] on `decision`.
pub fn optimize_randomized<F>(
    a: &PointSet,
    b: &PointSet,
    l: f64,
    decision: &mut F,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<f64>
where
    F: FnMut(f64) -> bool,
{
    optimize_randomized_report(a, b, l, decision, cfg, rng).map(|r| r.value)
}

/// As [`optimize_randomized`], with diagnostics.
pub fn optimize_randomized_report<F>(
    a: &PointSet,
    b: &PointSet,
    l: f64,
    decision: &mut F,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<OptReport>
where
    F: FnMut(f64) -> bool,
{
    let mut report = OptReport {
        value: 0.0,
        stages: 0,
        decision_calls: 0,
        gamma_edges: 0,
        pi_pairs: 0,
        shrink_rounds: Some(0),
    };
    report.decision_calls += 1;
    if decision(0.0) {
        return Ok(report);
    }
    let mn = (a.len() as u64 * b.len() as u64) as f64;
    let l = l.clamp(1.0, mn.max(1.0));
    let mut reruns = 0u32;
    loop {
        report.stages += 1;
        let shrink = shrink_interval(a, b, l, decision, cfg, rng)?;
        report.decision_calls += shrink.decision_calls;
        if let Some(r) = report.shrink_rounds.as_mut() {
            *r += shrink.rounds;
        }
        let out = brs_for_L(a, b, shrink.interval, l, cfg, rng)?;
        report.gamma_edges = out.gamma_edges();
        report.pi_pairs = out.pi_pairs();
        let mut vals = Vec::new();
        collect_cross_in_range(&out, a, b, shrink.interval, &mut vals);
        if (vals.len() as f64) > cfg.c_retry * l && reruns < cfg.max_shrink_reruns {
            // The shrink landed on an unluckily dense interval; retry
            // with fresh randomness rather than pay for a huge sort.
            reruns += 1;
            continue;
        }
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let cut = first_true_index(&vals, &mut report.decision_calls, |v| Ok(decision(v)))?;
        return match cut {
            Some(i) => {
                report.value = vals[i];
                Ok(report)
            }
            None => Err(Error::NoFeasibleValue),
        };
    }
}

/// Uniform sampler over certified (in-range) edges.
struct GammaSampler<'a> {
    out: &'a BrsOutput,
    cum: Vec<u64>,
    total: u64,
}

impl<'a> GammaSampler<'a> {
    fn new(out: &'a BrsOutput) -> Option<Self> {
        let mut cum = Vec::with_capacity(out.gamma.len());
        let mut total = 0u64;
        for b in &out.gamma {
            total += b.edges();
            cum.push(total);
        }
        if total == 0 {
            None
        } else {
            Some(GammaSampler { out, cum, total })
        }
    }

    fn draw(&self, rng: &mut Rng) -> (u32, u32) {
        use rand::Rng as _;
        let t = rng.gen_range(0..self.total);
        let idx = self.cum.partition_point(|&c| c <= t);
        let b = &self.out.gamma[idx];
        let offset = t - (self.cum[idx] - b.edges());
        let bl = b.b_side.len() as u64;
        (
            b.a_side[(offset / bl) as usize],
            b.b_side[(offset % bl) as usize],
        )
    }
}

fn max_in_range_value(
    out: &BrsOutput,
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
) -> Option<f64> {
    let mut vals = Vec::new();
    collect_cross_in_range(out, a, b, interval, &mut vals);
    vals.into_iter().max_by(f64::total_cmp)
}

fn brute_min_feasible_value<F>(
    a: &PointSet,
    b: &PointSet,
    decision: &mut F,
    calls: &mut u64,
) -> Result<f64>
where
    F: FnMut(f64) -> bool,
{
    let mut vals = Vec::with_capacity(a.len() * b.len());
    for &pa in a.as_slice() {
        for &pb in b.as_slice() {
            vals.push(sq_dist(pa, pb));
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    match first_true_index(&vals, calls, |v| Ok(decision(v)))? {
        Some(i) => Ok(vals[i]),
        None => Err(Error::NoFeasibleValue),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use rand::{Rng as _, SeedableRng};

    fn rng(seed: u64) -> Rng {
        Rng::seed_from_u64(seed)
    }

    fn random_set(n: usize, span: f64, rng: &mut Rng) -> PointSet {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(-span..span), rng.gen_range(-span..span)))
            .collect();
        PointSet::new(pts).unwrap()
    }

    /// Threshold decisions: true iff v >= t, with t a cross distance.
    fn threshold_decision(t: f64) -> impl FnMut(f64) -> bool {
        move |v| v >= t
    }

    fn kth_cross(a: &PointSet, b: &PointSet, k: usize) -> f64 {
        let mut vals = Vec::new();
        for &pa in a.as_slice() {
            for &pb in b.as_slice() {
                vals.push(crate::geom::sq_dist(pa, pb));
            }
        }
        vals.sort_by(f64::total_cmp);
        vals[k]
    }

    #[test]
    fn deterministic_finds_threshold_cross_distance() {
        let cfg = Config::default();
        let mut r = rng(41);
        for trial in 0..8 {
            let m = 4 + (trial * 19) % 80;
            let n = 3 + (trial * 23) % 80;
            let a = random_set(m, 20.0, &mut r);
            let b = random_set(n, 20.0, &mut r);
            let t = kth_cross(&a, &b, (m * n) / 3);
            let mut dec = threshold_decision(t);
            let got = optimize_deterministic(&a, &b, &mut dec, &cfg, &mut r).unwrap();
            assert_eq!(got, t, "m={m} n={n}");
        }
    }

    #[test]
    fn deterministic_zero_shortcut() {
        let a = PointSet::from_coords(&[(1.0, 1.0)]).unwrap();
        let b = PointSet::from_coords(&[(4.0, 5.0)]).unwrap();
        let cfg = Config::default();
        let mut r = rng(0);
        let mut dec = |_v: f64| true;
        assert_eq!(
            optimize_deterministic(&a, &b, &mut dec, &cfg, &mut r).unwrap(),
            0.0
        );
    }

    #[test]
    fn deterministic_no_feasible_value() {
        let a = PointSet::from_coords(&[(0.0, 0.0), (2.0, 0.0)]).unwrap();
        let b = PointSet::from_coords(&[(0.0, 1.0), (5.0, 5.0)]).unwrap();
        let cfg = Config::default();
        let mut r = rng(0);
        let mut dec = |_v: f64| false;
        assert!(matches!(
            optimize_deterministic(&a, &b, &mut dec, &cfg, &mut r),
            Err(Error::NoFeasibleValue)
        ));
    }

    #[test]
    fn randomized_finds_threshold_cross_distance() {
        let cfg = Config {
            cutoff_pairs: 64,
            ..Config::default()
        };
        let mut r = rng(97);
        for trial in 0..8 {
            let m = 4 + (trial * 31) % 90;
            let n = 5 + (trial * 13) % 70;
            let a = random_set(m, 15.0, &mut r);
            let b = random_set(n, 15.0, &mut r);
            let t = kth_cross(&a, &b, (m * n) / 2);
            let mut dec = threshold_decision(t);
            let l = ((m + n) as f64).powf(0.4).max(4.0);
            let got = optimize_randomized(&a, &b, l, &mut dec, &cfg, &mut r).unwrap();
            assert_eq!(got, t, "m={m} n={n}");
        }
    }

    #[test]
    fn shrink_interval_contains_optimum() {
        let cfg = Config {
            cutoff_pairs: 64,
            ..Config::default()
        };
        let mut r = rng(71);
        for trial in 0..10 {
            let m = 10 + (trial * 17) % 60;
            let n = 10 + (trial * 29) % 60;
            let a = random_set(m, 25.0, &mut r);
            let b = random_set(n, 25.0, &mut r);
            let t = kth_cross(&a, &b, (m * n) / 4);
            let mut dec = threshold_decision(t);
            for l in [4.0, 16.0, 64.0] {
                let res = shrink_interval(&a, &b, l, &mut dec, &cfg, &mut r).unwrap();
                assert!(
                    res.interval.contains(t),
                    "optimum {t} left interval {:?} (l={l})",
                    res.interval
                );
            }
        }
    }

    #[test]
    fn shrink_trivial_accept_with_tiny_instance() {
        // Few enough pairs that the budget swallows everything in the
        // very first round.
        let a = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        let b = PointSet::from_coords(&[(0.0, 1.0), (3.0, 0.0)]).unwrap();
        let cfg = Config::default();
        let mut r = rng(2);
        let mut dec = threshold_decision(1.0);
        let res = shrink_interval(&a, &b, 4.0, &mut dec, &cfg, &mut r).unwrap();
        assert_eq!(res.rounds, 1);
        assert!(!res.low_confidence);
        assert!(res.claimed_l <= 4.0);
        // The open top got trimmed to the largest recorded value.
        assert!(res.interval.hi().is_finite());
        assert!(res.interval.contains(1.0));
    }

    #[test]
    fn gamma_sampler_uniform_over_edges() {
        use crate::brs::Biclique;
        let out = BrsOutput {
            interval: SqInterval::everything(),
            gamma: vec![
                Biclique {
                    a_side: vec![0],
                    b_side: vec![0, 1],
                },
                Biclique {
                    a_side: vec![1, 2],
                    b_side: vec![2],
                },
            ],
            pi: Vec::new(),
        };
        let gs = GammaSampler::new(&out).unwrap();
        let mut counts = std::collections::HashMap::new();
        let mut r = rng(9);
        let draws = 40_000usize;
        for _ in 0..draws {
            *counts.entry(gs.draw(&mut r)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 4);
        for (_, c) in counts {
            let f = c as f64 / draws as f64;
            assert!((f - 0.25).abs() < 0.02, "frequency {f}");
        }
    }
}
