//! Batched range search: covering every ordered cross pair whose squared
//! distance falls in a half-open interval by edge-disjoint bicliques.
//!
//! The output has two parts. `gamma` bicliques are certified: every pair
//! they span is in range. `pi` bicliques are uncertain: their pairs may
//! or may not be in range, but every in-range pair appears in exactly
//! one biclique of `gamma ∪ pi`, and no pair appears twice anywhere.
//!
//! Construction runs rounds of a primal/dual scheme over hierarchical
//! cuttings of distance annuli: one round certifies pairs whose annulus
//! fully contains the located cell, and hands the unresolved remainder
//! down as smaller subproblems.

use crate::config::{safe_log2, Config};
use crate::cuttings::{
    build_hierarchical_cutting, compute_contained_annuli, locate_id_subset, Annulus,
    BoundaryCircle, CircleSide,
};
use crate::error::Error;
use crate::geom::{PointSet, Rng, SqInterval};
use crate::Result;

/// Complete bipartite set of ordered pairs `a_side × b_side`, with ids
/// indexing the original point sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclique {
    pub a_side: Vec<u32>,
    pub b_side: Vec<u32>,
}

impl Biclique {
    #[inline]
    pub fn edges(&self) -> u64 {
        self.a_side.len() as u64 * self.b_side.len() as u64
    }
}

/// Result of a batched range search over one interval.
#[derive(Debug, Clone)]
pub struct BrsOutput {
    pub interval: SqInterval,
    /// Certified bicliques: every spanned pair is in range.
    pub gamma: Vec<Biclique>,
    /// Uncertain bicliques: cover the rest of the in-range pairs.
    pub pi: Vec<Biclique>,
}

impl BrsOutput {
    pub fn gamma_edges(&self) -> u64 {
        self.gamma.iter().map(Biclique::edges).sum()
    }

    pub fn pi_pairs(&self) -> u64 {
        self.pi.iter().map(Biclique::edges).sum()
    }

    /// Sum of certified a-side sizes (scaling diagnostics).
    pub fn sum_gamma_a_sides(&self) -> u64 {
        self.gamma.iter().map(|b| b.a_side.len() as u64).sum()
    }
}

/// Total certified pair count without materializing edges.
pub fn count_gamma_edges(out: &BrsOutput) -> u64 {
    out.gamma_edges()
}

/// Uniform sampler over the ordered pairs recorded in `pi`.
pub struct UncertainSampler<'a> {
    out: &'a BrsOutput,
    /// Cumulative pair counts per biclique.
    cum: Vec<u64>,
    total: u64,
}

impl<'a> UncertainSampler<'a> {
    pub fn new(out: &'a BrsOutput) -> Result<Self> {
        let mut cum = Vec::with_capacity(out.pi.len());
        let mut total = 0u64;
        for b in &out.pi {
            total += b.edges();
            cum.push(total);
        }
        if total == 0 {
            return Err(Error::EmptyCollection("uncertain pair sampler"));
        }
        Ok(UncertainSampler { out, cum, total })
    }

    pub fn total_pairs(&self) -> u64 {
        self.total
    }

    /// Uniformly random recorded ordered pair (a id, b id).
    pub fn draw(&self, rng: &mut Rng) -> (u32, u32) {
        use rand::Rng as _;
        let x = rng.gen_range(0..self.total);
        let idx = self.cum.partition_point(|&c| c <= x);
        let base = if idx == 0 { 0 } else { self.cum[idx - 1] };
        let b = &self.out.pi[idx];
        let off = x - base;
        let bn = b.b_side.len() as u64;
        (
            b.a_side[(off / bn) as usize],
            b.b_side[(off % bn) as usize],
        )
    }
}

/// One-shot uniform draw from the recorded uncertain pairs.
pub fn sample_uncertain_pair(out: &BrsOutput, rng: &mut Rng) -> Result<(u32, u32)> {
    Ok(UncertainSampler::new(out)?.draw(rng))
}

// ---------------------------------------------------------------------
// Primal round.
// ---------------------------------------------------------------------

/// Output of one primal round: certified bicliques plus unresolved
/// subproblems (id lists into the original sets, already in final
/// (a, b) orientation).
struct RoundOut {
    gamma: Vec<Biclique>,
    subs: Vec<(Vec<u32>, Vec<u32>)>,
}

/// One round: distance annuli around the `a_ids` points, a hierarchical
/// (1/r)-cutting of their boundary circles, location of the `b_ids`
/// points, certified (annulus ⊇ cell) bicliques per cell, and residual
/// subproblems at the last level chunked on the located side.
///
/// With `swap`, emitted bicliques and subproblems are flipped so the
/// caller's (a, b) orientation is restored (used for dual rounds).
fn primal_round(
    a: &PointSet,
    b: &PointSet,
    a_ids: &[u32],
    b_ids: &[u32],
    interval: SqInterval,
    r: f64,
    swap: bool,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<RoundOut> {
    if interval.is_empty() || a_ids.is_empty() || b_ids.is_empty() {
        return Ok(RoundOut {
            gamma: Vec::new(),
            subs: Vec::new(),
        });
    }
    let orient = |x: Vec<u32>, y: Vec<u32>| if swap { (y, x) } else { (x, y) };
    // Below the cutoff a direct scan certifies everything; building a
    // cutting has a large fixed cost that only pays off on big blocks.
    if (a_ids.len() as u64) * (b_ids.len() as u64) <= cfg.cutoff_pairs {
        let mut gamma = Vec::new();
        for &ai in a_ids {
            let pa = a.get(ai);
            let row: Vec<u32> = b_ids
                .iter()
                .copied()
                .filter(|&bi| interval.contains(crate::geom::sq_dist(pa, b.get(bi))))
                .collect();
            if !row.is_empty() {
                let (a_side, b_side) = orient(vec![ai], row);
                gamma.push(Biclique { a_side, b_side });
            }
        }
        return Ok(RoundOut {
            gamma,
            subs: Vec::new(),
        });
    }
    let lo = interval.lo();
    let hi = interval.hi();
    let mut annuli = Vec::with_capacity(a_ids.len());
    let mut circles = Vec::new();
    for &id in a_ids {
        let center = a.get(id);
        annuli.push(Annulus {
            id,
            center,
            interval,
        });
        if lo > 0.0 {
            circles.push(BoundaryCircle::new(center, lo, id, CircleSide::Inner)?);
        }
        if hi.is_finite() {
            circles.push(BoundaryCircle::new(center, hi, id, CircleSide::Outer)?);
        }
    }
    let r = r.max(1.0);
    let mut cutting = build_hierarchical_cutting(circles, r, cfg.rho, cfg, rng)?;
    locate_id_subset(&mut cutting, b, b_ids);
    let pins = compute_contained_annuli(&mut cutting, &annuli);

    let mut gamma = Vec::new();
    for id in 0..cutting.num_cells() as u32 {
        let cell = cutting.cell(id);
        if !cell.contained_a.is_empty() && !cell.canonical_b.is_empty() {
            let (a_side, b_side) = orient(cell.contained_a.clone(), cell.canonical_b.clone());
            gamma.push(Biclique { a_side, b_side });
        }
    }

    let chunk = ((b_ids.len() as f64) / (r * r)).ceil().max(1.0) as usize;
    let mut subs = Vec::new();
    let last = cutting.num_levels() - 1;
    for &cell_id in cutting.level_cells(last) {
        let cell = cutting.cell(cell_id);
        if cell.canonical_b.is_empty() {
            continue;
        }
        let mut active: Vec<u32> = cell
            .conflict
            .iter()
            .map(|&c| cutting.circles()[c as usize].owner)
            .collect();
        for &c in cutting.top_riders(cell_id) {
            active.push(cutting.circles()[c as usize].owner);
        }
        active.extend_from_slice(&pins[cell_id as usize]);
        active.sort_unstable();
        active.dedup();
        active.retain(|&owner| !cutting.certified_at_or_above(cell_id, owner));
        if active.is_empty() {
            continue;
        }
        let located = &cell.canonical_b;
        let mut start = 0usize;
        while start < located.len() {
            let mut end = (start + chunk).min(located.len());
            // Merge a short tail into the final chunk.
            if located.len() - end < chunk {
                end = located.len();
            }
            let (sa, sb) = orient(active.clone(), located[start..end].to_vec());
            subs.push((sa, sb));
            start = end;
        }
    }
    Ok(RoundOut { gamma, subs })
}

// ---------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------

/// Partial batched range search: one primal round on (A, B) followed by
/// one dual round (roles swapped) on each residual subproblem; the dual
/// rounds' residues become the uncertain bicliques.
pub fn partial_brs(
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
    r: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<BrsOutput> {
    let a_ids: Vec<u32> = (0..a.len() as u32).collect();
    let b_ids: Vec<u32> = (0..b.len() as u32).collect();
    partial_brs_on(a, b, &a_ids, &b_ids, interval, r, cfg, rng)
}

fn partial_brs_on(
    a: &PointSet,
    b: &PointSet,
    a_ids: &[u32],
    b_ids: &[u32],
    interval: SqInterval,
    r: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<BrsOutput> {
    let mut gamma = Vec::new();
    let mut pi = Vec::new();
    let round1 = primal_round(a, b, a_ids, b_ids, interval, r, false, cfg, rng)?;
    gamma.extend(round1.gamma);
    for (sa, sb) in round1.subs {
        // Dual: annuli around the b-side, locate the a-side.
        let round2 = primal_round(b, a, &sb, &sa, interval, r, true, cfg, rng)?;
        gamma.extend(round2.gamma);
        for (ra, rb) in round2.subs {
            pi.push(Biclique {
                a_side: ra,
                b_side: rb,
            });
        }
    }
    Ok(BrsOutput {
        interval,
        gamma,
        pi,
    })
}

/// Self-join partial search over the ordered pairs of one set: a coarse
/// partial round, then a finer partial round on every residue. Each
/// unordered in-range pair {p, q} is covered exactly twice, once per
/// orientation; self pairs (p, p) have squared distance 0, which the
/// open lower bound keeps out of range.
pub fn partial_brs_selfjoin(
    p: &PointSet,
    interval: SqInterval,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<BrsOutput> {
    let n = p.len() as f64;
    let all: Vec<u32> = (0..p.len() as u32).collect();
    // Parameter floors keep the constant-size regime subdividing: with
    // the conflict-bound slack at 4, any r ≤ 4 cutting is vacuous.
    let r1 = (n.cbrt() / safe_log2(n)).max(8.0);
    let r2 = (safe_log2(n) / safe_log2(safe_log2(n))).max(8.0);
    let round1 = partial_brs_on(p, p, &all, &all, interval, r1, cfg, rng)?;
    let mut gamma = round1.gamma;
    let mut pi = Vec::new();
    for b in round1.pi {
        let out = partial_brs_on(p, p, &b.a_side, &b.b_side, interval, r2, cfg, rng)?;
        gamma.extend(out.gamma);
        pi.extend(out.pi);
    }
    Ok(BrsOutput {
        interval,
        gamma,
        pi,
    })
}

/// Complete batched range search: recursion until nothing is uncertain.
/// The result's `pi` is empty and `gamma` covers every in-range ordered
/// pair exactly once. With `preserve_order`, biclique sides are sorted
/// by point id (the construction keeps ids sorted throughout, so this
/// is asserted rather than re-established).
pub fn complete_brs(
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
    cfg: &Config,
    rng: &mut Rng,
    preserve_order: bool,
) -> Result<BrsOutput> {
    let a_ids: Vec<u32> = (0..a.len() as u32).collect();
    let b_ids: Vec<u32> = (0..b.len() as u32).collect();
    let mut gamma = Vec::new();
    complete_rec(a, b, &a_ids, &b_ids, interval, cfg, rng, &mut gamma, 0)?;
    if preserve_order {
        debug_assert!(gamma
            .iter()
            .all(|t| t.a_side.windows(2).all(|w| w[0] < w[1])
                && t.b_side.windows(2).all(|w| w[0] < w[1])));
    }
    Ok(BrsOutput {
        interval,
        gamma,
        pi: Vec::new(),
    })
}

fn complete_rec(
    a: &PointSet,
    b: &PointSet,
    a_ids: &[u32],
    b_ids: &[u32],
    interval: SqInterval,
    cfg: &Config,
    rng: &mut Rng,
    gamma: &mut Vec<Biclique>,
    depth: u32,
) -> Result<()> {
    let m = a_ids.len();
    let n = b_ids.len();
    if m == 0 || n == 0 || interval.is_empty() {
        return Ok(());
    }
    if (m as u64) * (n as u64) <= cfg.cutoff_pairs || m.min(n) <= 2 || depth >= 64 {
        // Brute scan, one row biclique per a point.
        for &ai in a_ids {
            let pa = a.get(ai);
            let row: Vec<u32> = b_ids
                .iter()
                .copied()
                .filter(|&bi| interval.contains(crate::geom::sq_dist(pa, b.get(bi))))
                .collect();
            if !row.is_empty() {
                gamma.push(Biclique {
                    a_side: vec![ai],
                    b_side: row,
                });
            }
        }
        return Ok(());
    }
    let big = m.max(n) as f64;
    let small = m.min(n) as f64;
    let ratio = big / small;
    if ratio >= 8.0 {
        // Lopsided: one primal round with annuli around the small side.
        let round = if m <= n {
            primal_round(a, b, a_ids, b_ids, interval, ratio, false, cfg, rng)?
        } else {
            primal_round(b, a, b_ids, a_ids, interval, ratio, true, cfg, rng)?
        };
        gamma.extend(round.gamma);
        for (sa, sb) in round.subs {
            complete_rec(a, b, &sa, &sb, interval, cfg, rng, gamma, depth + 1)?;
        }
    } else {
        let r = (big.cbrt() / safe_log2(big)).max(8.0);
        let out = partial_brs_on(a, b, a_ids, b_ids, interval, r, cfg, rng)?;
        gamma.extend(out.gamma);
        for t in out.pi {
            complete_rec(a, b, &t.a_side, &t.b_side, interval, cfg, rng, gamma, depth + 1)?;
        }
    }
    Ok(())
}

/// Stage-level search for the staged optimizers over a cross product.
///
/// An unbounded interval cannot certify anything useful, so that case
/// returns the whole product as one biclique in `gamma` with empty
/// `pi`; callers treat stage output as a candidate source and must
/// filter values to the interval. Bounded stages run the real partial
/// scheme, lopsidedness-aware.
pub(crate) fn stage_brs_bipartite(
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<BrsOutput> {
    let m = a.len();
    let n = b.len();
    let a_ids: Vec<u32> = (0..m as u32).collect();
    let b_ids: Vec<u32> = (0..n as u32).collect();
    if interval.is_empty() {
        return Ok(BrsOutput {
            interval,
            gamma: Vec::new(),
            pi: Vec::new(),
        });
    }
    if !interval.hi().is_finite() {
        return Ok(BrsOutput {
            interval,
            gamma: vec![Biclique {
                a_side: a_ids,
                b_side: b_ids,
            }],
            pi: Vec::new(),
        });
    }
    if (m as u64) * (n as u64) <= cfg.cutoff_pairs || m.min(n) <= 2 {
        let mut gamma = Vec::new();
        for &ai in &a_ids {
            let pa = a.get(ai);
            let row: Vec<u32> = b_ids
                .iter()
                .copied()
                .filter(|&bi| interval.contains(crate::geom::sq_dist(pa, b.get(bi))))
                .collect();
            if !row.is_empty() {
                gamma.push(Biclique {
                    a_side: vec![ai],
                    b_side: row,
                });
            }
        }
        return Ok(BrsOutput {
            interval,
            gamma,
            pi: Vec::new(),
        });
    }
    let big = m.max(n) as f64;
    let small = m.min(n) as f64;
    let ratio = big / small;
    if ratio >= 8.0 {
        let round = if m <= n {
            primal_round(a, b, &a_ids, &b_ids, interval, ratio, false, cfg, rng)?
        } else {
            primal_round(b, a, &b_ids, &a_ids, interval, ratio, true, cfg, rng)?
        };
        let mut gamma = round.gamma;
        let mut pi = Vec::new();
        for (sa, sb) in round.subs {
            let sub_big = sa.len().max(sb.len()) as f64;
            let r2 = (sub_big.cbrt() / safe_log2(sub_big)).max(8.0);
            let out = partial_brs_on(a, b, &sa, &sb, interval, r2, cfg, rng)?;
            gamma.extend(out.gamma);
            pi.extend(out.pi);
        }
        Ok(BrsOutput {
            interval,
            gamma,
            pi,
        })
    } else {
        let r = (big.cbrt() / safe_log2(big)).max(8.0);
        partial_brs_on(a, b, &a_ids, &b_ids, interval, r, cfg, rng)
    }
}

/// Partial search tuned to a target residual budget `L`: the uncertain
/// pair count comes out near `(m+n)^{4/3} L^{2/3}` by choosing
/// `r = ((m+n)/L)^{1/3}`.
#[allow(non_snake_case)]
pub fn brs_for_L(
    a: &PointSet,
    b: &PointSet,
    interval: SqInterval,
    l: f64,
    cfg: &Config,
    rng: &mut Rng,
) -> Result<BrsOutput> {
    let m = a.len() as f64;
    let n = b.len() as f64;
    if !(l >= 1.0) || l > m * n {
        return Err(Error::InvalidInstance("residual budget out of range"));
    }
    let r = ((m + n) / l).cbrt().max(1.0);
    partial_brs(a, b, interval, r, cfg, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{sq_dist, PointSet};
    use crate::oracle::{brute_brs_check, BrsCheck};
    use rand::{Rng as _, SeedableRng};

    fn rng(seed: u64) -> Rng {
        Rng::seed_from_u64(seed)
    }

    fn random_set(n: usize, scale: f64, rng: &mut Rng) -> PointSet {
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen::<f64>() * scale, rng.gen::<f64>() * scale))
            .collect();
        PointSet::from_coords(&pts).unwrap()
    }

    #[test]
    fn single_annulus_certifies_only_in_range() {
        let a = PointSet::from_coords(&[(0.0, 0.0)]).unwrap();
        let b = PointSet::from_coords(&[(0.0, 1.0), (0.0, 3.0)]).unwrap();
        let out = complete_brs(
            &a,
            &b,
            SqInterval::new(0.0, 4.0).unwrap(),
            &Config::default(),
            &mut rng(1),
            false,
        )
        .unwrap();
        assert_eq!(out.gamma_edges(), 1);
        assert_eq!(out.pi_pairs(), 0);
        let t = &out.gamma[0];
        assert_eq!((t.a_side.as_slice(), t.b_side.as_slice()), (&[0u32][..], &[0u32][..]));
    }

    #[test]
    fn coincident_pair_never_in_range() {
        let p = PointSet::from_coords(&[(2.0, 2.0), (2.0, 2.0)]).unwrap();
        let out = partial_brs_selfjoin(
            &p,
            SqInterval::new(0.0, 1.0).unwrap(),
            &Config::default(),
            &mut rng(2),
        )
        .unwrap();
        assert_eq!(out.gamma_edges(), 0);
        assert_eq!(
            brute_brs_check(&p, &p, out.interval, &out),
            BrsCheck::Ok
        );
    }

    #[test]
    fn full_interval_covers_all_cross_pairs() {
        let mut r = rng(3);
        let a = random_set(50, 10.0, &mut r);
        let b = random_set(50, 10.0, &mut r);
        let cfg = Config {
            cutoff_pairs: 64,
            ..Config::default()
        };
        let out = complete_brs(&a, &b, SqInterval::everything(), &cfg, &mut r, true).unwrap();
        assert_eq!(out.gamma_edges(), 2500);
        assert_eq!(brute_brs_check(&a, &b, out.interval, &out), BrsCheck::Ok);
    }

    #[test]
    fn empty_interval_gives_empty_output() {
        let mut r = rng(4);
        let a = random_set(30, 5.0, &mut r);
        let b = random_set(30, 5.0, &mut r);
        let out = brs_for_L(
            &a,
            &b,
            SqInterval::new(0.0, 0.0).unwrap(),
            9.0,
            &Config::default(),
            &mut r,
        )
        .unwrap();
        assert!(out.gamma.is_empty() && out.pi.is_empty());
    }

    #[test]
    fn partial_outputs_check_out_across_variants() {
        // Small cutoff so these sizes exercise the cutting machinery
        // instead of the direct-scan gate.
        let cfg = Config {
            cutoff_pairs: 64,
            ..Config::default()
        };
        for seed in 0..12u64 {
            let mut r = rng(100 + seed);
            let a = random_set(40 + (seed as usize % 30), 8.0, &mut r);
            let b = random_set(35 + (seed as usize % 40), 8.0, &mut r);
            let lo = r.gen::<f64>() * 20.0;
            let hi = lo + r.gen::<f64>() * 60.0;
            let ivs = [
                SqInterval::new(lo, hi).unwrap(),
                SqInterval::new(0.0, hi).unwrap(),
                SqInterval::everything(),
            ];
            for iv in ivs {
                let o1 = partial_brs(&a, &b, iv, 8.0, &cfg, &mut r).unwrap();
                assert_eq!(brute_brs_check(&a, &b, iv, &o1), BrsCheck::Ok, "partial seed {seed}");
                let o2 = complete_brs(&a, &b, iv, &cfg, &mut r, true).unwrap();
                assert_eq!(brute_brs_check(&a, &b, iv, &o2), BrsCheck::Ok, "complete seed {seed}");
                assert!(o2.pi.is_empty());
                let o3 = brs_for_L(&a, &b, iv, 16.0, &cfg, &mut r).unwrap();
                assert_eq!(brute_brs_check(&a, &b, iv, &o3), BrsCheck::Ok, "for_L seed {seed}");
                let oj = partial_brs_selfjoin(&a, iv, &cfg, &mut r).unwrap();
                assert_eq!(brute_brs_check(&a, &a, iv, &oj), BrsCheck::Ok, "selfjoin seed {seed}");
            }
        }
    }

    #[test]
    fn selfjoin_covers_each_unordered_pair_twice() {
        let mut r = rng(7);
        let p = random_set(60, 6.0, &mut r);
        let iv = SqInterval::new(1.0, 30.0).unwrap();
        let cfg = Config {
            cutoff_pairs: 64,
            ..Config::default()
        };
        let out = partial_brs_selfjoin(&p, iv, &cfg, &mut r).unwrap();
        // Count in-range coverage over gamma and pi (pi filtered).
        let mut covered = 0u64;
        for t in out.gamma.iter().chain(out.pi.iter()) {
            for &ai in &t.a_side {
                for &bi in &t.b_side {
                    if iv.contains(sq_dist(p.get(ai), p.get(bi))) {
                        covered += 1;
                    }
                }
            }
        }
        let mut expect = 0u64;
        for i in 0..p.len() {
            for j in 0..p.len() {
                if i != j && iv.contains(sq_dist(p.get(i as u32), p.get(j as u32))) {
                    expect += 1;
                }
            }
        }
        assert_eq!(covered, expect);
    }

    #[test]
    fn gamma_edge_count_is_plain_arithmetic() {
        let out = BrsOutput {
            interval: SqInterval::everything(),
            gamma: vec![
                Biclique {
                    a_side: vec![0, 1],
                    b_side: vec![0, 1, 2],
                },
                Biclique {
                    a_side: vec![2],
                    b_side: vec![3, 4, 5, 6],
                },
            ],
            pi: Vec::new(),
        };
        assert_eq!(count_gamma_edges(&out), 10);
    }

    #[test]
    fn sampler_is_proportional_to_biclique_size() {
        let out = BrsOutput {
            interval: SqInterval::everything(),
            gamma: Vec::new(),
            pi: vec![
                Biclique {
                    a_side: vec![0, 1],
                    b_side: vec![10, 11],
                },
                Biclique {
                    a_side: vec![2, 3, 4, 5],
                    b_side: vec![12, 13, 14, 15],
                },
            ],
        };
        let samp = UncertainSampler::new(&out).unwrap();
        let mut r = rng(9);
        let draws = 100_000u64;
        let mut first = 0u64;
        for _ in 0..draws {
            let (ai, _) = samp.draw(&mut r);
            if ai < 2 {
                first += 1;
            }
        }
        // Expected fraction 4/20 = 0.2; 3 sigma of a binomial at n=1e5.
        let p = first as f64 / draws as f64;
        let sigma = (0.2f64 * 0.8 / draws as f64).sqrt();
        assert!((p - 0.2).abs() < 3.0 * sigma, "fraction {p}");
    }

    #[test]
    fn single_pair_sampler_always_returns_it() {
        let out = BrsOutput {
            interval: SqInterval::everything(),
            gamma: Vec::new(),
            pi: vec![Biclique {
                a_side: vec![7],
                b_side: vec![9],
            }],
        };
        let mut r = rng(11);
        for _ in 0..20 {
            assert_eq!(sample_uncertain_pair(&out, &mut r).unwrap(), (7, 9));
        }
    }

    #[test]
    fn sampler_rejects_empty_residue() {
        let out = BrsOutput {
            interval: SqInterval::everything(),
            gamma: Vec::new(),
            pi: Vec::new(),
        };
        let mut r = rng(12);
        assert!(matches!(
            sample_uncertain_pair(&out, &mut r),
            Err(Error::EmptyCollection(_))
        ));
    }
}
