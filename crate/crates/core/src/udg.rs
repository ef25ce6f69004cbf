//! Reverse shortest path on unit-disk graphs: find the smallest radius
//! (reported squared) for which the disk graph over a point set admits
//! an s-t path within a hop or length budget.
//!
//! The disk graph at squared radius `sq_delta` joins two points when
//! their squared distance is at most `sq_delta`. The unweighted flavor
//! budgets hop count; the weighted flavor budgets total Euclidean
//! length.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::config::{safe_log2, Config};
use crate::error::Error;
use crate::framework::{optimize_randomized_report, OptReport};
use crate::geom::{sq_dist, Point, PointSet, Rng};
use crate::Result;

/// One reverse-shortest-path query: endpoints, budget, flavor.
#[derive(Debug, Clone)]
pub struct RspInstance {
    pub points: PointSet,
    pub s: u32,
    pub t: u32,
    pub lambda: f64,
    pub weighted: bool,
}

impl RspInstance {
    pub fn new(points: PointSet, s: u32, t: u32, lambda: f64, weighted: bool) -> Result<Self> {
        let n = points.len() as u32;
        if s >= n || t >= n {
            return Err(Error::InvalidInstance("endpoint id out of range"));
        }
        if s == t {
            return Err(Error::InvalidInstance("endpoints must differ"));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidInstance("budget must be finite and nonnegative"));
        }
        Ok(RspInstance {
            points,
            s,
            t,
            lambda,
            weighted,
        })
    }
}

/// Does the disk graph at `sq_delta` admit an s-t path within budget?
/// Monotone in `sq_delta`.
pub fn udg_decide(inst: &RspInstance, sq_delta: f64) -> bool {
    if sq_delta < 0.0 {
        return false;
    }
    if inst.weighted {
        decide_weighted(inst, sq_delta)
    } else {
        decide_unweighted(inst, sq_delta)
    }
}

fn cell_width(sq_delta: f64) -> f64 {
    if sq_delta > 0.0 {
        sq_delta.sqrt()
    } else {
        1.0
    }
}

fn cell_of(p: Point, width: f64) -> (i64, i64) {
    ((p.x / width).floor() as i64, (p.y / width).floor() as i64)
}

fn grid_cells(points: &PointSet, width: f64) -> HashMap<(i64, i64), Vec<u32>> {
    let mut cells: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, &p) in points.as_slice().iter().enumerate() {
        cells.entry(cell_of(p, width)).or_default().push(i as u32);
    }
    cells
}

fn remove_from_cell(cells: &mut HashMap<(i64, i64), Vec<u32>>, key: (i64, i64), id: u32) {
    if let Some(v) = cells.get_mut(&key) {
        if let Some(pos) = v.iter().position(|&x| x == id) {
            v.swap_remove(pos);
        }
    }
}

fn decide_unweighted(inst: &RspInstance, sq_delta: f64) -> bool {
    let budget = inst.lambda.floor();
    if budget < 1.0 {
        return false;
    }
    let budget = budget as u64;
    let pts = &inst.points;
    let width = cell_width(sq_delta);
    let mut cells = grid_cells(pts, width);
    let ps = pts.get(inst.s);
    remove_from_cell(&mut cells, cell_of(ps, width), inst.s);
    let mut queue = VecDeque::new();
    queue.push_back((inst.s, 0u64));
    // Neighbors live in the 3x3 cell block; labeled points leave their
    // cell so every point is scanned into the queue at most once.
    while let Some((u, d)) = queue.pop_front() {
        if d == budget {
            continue;
        }
        let pu = pts.get(u);
        let (cx, cy) = cell_of(pu, width);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(v) = cells.get_mut(&(cx + dx, cy + dy)) else {
                    continue;
                };
                let mut i = 0;
                while i < v.len() {
                    let w = v[i];
                    if sq_dist(pu, pts.get(w)) <= sq_delta {
                        if w == inst.t {
                            return true;
                        }
                        v.swap_remove(i);
                        queue.push_back((w, d + 1));
                    } else {
                        i += 1;
                    }
                }
            }
        }
    }
    false
}

/// Finite comparison key for path lengths (never NaN).
#[derive(Copy, Clone, PartialEq)]
struct Cost(f64);

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn decide_weighted(inst: &RspInstance, sq_delta: f64) -> bool {
    let pts = &inst.points;
    let n = pts.len();
    let width = cell_width(sq_delta);
    let mut cells = grid_cells(pts, width);
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    dist[inst.s as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Cost(0.0), inst.s)));
    // Paths longer than the budget are never pushed, so settling `t`
    // proves feasibility.
    while let Some(Reverse((Cost(du), u))) = heap.pop() {
        if settled[u as usize] {
            continue;
        }
        settled[u as usize] = true;
        if u == inst.t {
            return true;
        }
        let pu = pts.get(u);
        remove_from_cell(&mut cells, cell_of(pu, width), u);
        let (cx, cy) = cell_of(pu, width);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(v) = cells.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &w in v {
                    if settled[w as usize] {
                        continue;
                    }
                    let sq = sq_dist(pu, pts.get(w));
                    if sq > sq_delta {
                        continue;
                    }
                    let nd = du + sq.sqrt();
                    if nd <= inst.lambda && nd < dist[w as usize] {
                        dist[w as usize] = nd;
                        heap.push(Reverse((Cost(nd), w)));
                    }
                }
            }
        }
    }
    false
}

/// Least squared radius whose disk graph admits an in-budget s-t path.
pub fn rsp(inst: &RspInstance, cfg: &Config, rng: &mut Rng) -> Result<f64> {
    rsp_report(inst, cfg, rng).map(|r| r.value)
}

/// As [`rsp`], with diagnostics.
pub fn rsp_report(inst: &RspInstance, cfg: &Config, rng: &mut Rng) -> Result<OptReport> {
    // Feasibility at the complete graph (radius = diameter): one hop
    // suffices unweighted; the straight s-t length is optimal weighted.
    let feasible = if inst.weighted {
        sq_dist(inst.points.get(inst.s), inst.points.get(inst.t)).sqrt() <= inst.lambda
    } else {
        inst.lambda >= 1.0
    };
    if !feasible {
        return Err(Error::NoFeasibleValue);
    }
    let n = inst.points.len() as f64;
    let l = if inst.weighted {
        n.powf(0.4) / safe_log2(n).powf(0.6)
    } else {
        n.powf(0.4) * safe_log2(n).powf(1.2)
    };
    let mut decision = |sq: f64| udg_decide(inst, sq);
    optimize_randomized_report(&inst.points, &inst.points, l, &mut decision, cfg, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_rsp, brute_rsp_decide};
    use rand::{Rng as _, SeedableRng};

    fn rng(seed: u64) -> Rng {
        Rng::seed_from_u64(seed)
    }

    fn chain(n: usize, step: f64) -> PointSet {
        PointSet::new((0..n).map(|i| Point::new(i as f64 * step, 0.0)).collect()).unwrap()
    }

    fn random_instance(n: usize, span: f64, weighted: bool, r: &mut Rng) -> RspInstance {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(r.gen_range(-span..span), r.gen_range(-span..span)))
            .collect();
        let s = r.gen_range(0..n as u32);
        let mut t = r.gen_range(0..n as u32);
        while t == s {
            t = r.gen_range(0..n as u32);
        }
        let lambda = if weighted {
            r.gen_range(0.0..4.0 * span)
        } else {
            r.gen_range(1.0..(n as f64))
        };
        RspInstance::new(PointSet::new(pts).unwrap(), s, t, lambda, weighted).unwrap()
    }

    #[test]
    fn validation_rejects_bad_instances() {
        let p = chain(3, 1.0);
        assert!(RspInstance::new(p.clone(), 0, 0, 1.0, false).is_err());
        assert!(RspInstance::new(p.clone(), 0, 3, 1.0, false).is_err());
        assert!(RspInstance::new(p.clone(), 0, 1, -1.0, false).is_err());
        assert!(RspInstance::new(p.clone(), 0, 1, f64::NAN, false).is_err());
        assert!(RspInstance::new(p, 0, 1, 1.0, false).is_ok());
    }

    #[test]
    fn chain_hop_budgets() {
        // Vertices at 0, 3, 6, 9 on a line; s = first, t = last.
        let p = chain(4, 3.0);
        for (lambda, want) in [(3.0, 9.0), (2.0, 36.0), (1.0, 81.0)] {
            let inst = RspInstance::new(p.clone(), 0, 3, lambda, false).unwrap();
            assert!(udg_decide(&inst, want));
            assert!(!udg_decide(&inst, want * 0.999));
            let cfg = Config::default();
            let mut r = rng(7);
            assert_eq!(rsp(&inst, &cfg, &mut r).unwrap(), want, "lambda={lambda}");
        }
    }

    #[test]
    fn chain_length_budget_weighted() {
        let p = chain(4, 3.0);
        let inst = RspInstance::new(p.clone(), 0, 3, 9.0, true).unwrap();
        // Budget exactly the path length: three hops of 3 work.
        assert!(udg_decide(&inst, 9.0));
        assert!(!udg_decide(&inst, 8.9));
        let cfg = Config::default();
        let mut r = rng(5);
        assert_eq!(rsp(&inst, &cfg, &mut r).unwrap(), 9.0);
        // Any budget under the straight-line length is hopeless.
        let tight = RspInstance::new(p, 0, 3, 8.9, true).unwrap();
        assert!(matches!(
            rsp(&tight, &cfg, &mut r),
            Err(Error::NoFeasibleValue)
        ));
    }

    #[test]
    fn unweighted_budget_under_one_hop_is_infeasible() {
        let p = chain(2, 1.0);
        let inst = RspInstance::new(p, 0, 1, 0.5, false).unwrap();
        assert!(!udg_decide(&inst, 100.0));
        let cfg = Config::default();
        let mut r = rng(0);
        assert!(matches!(
            rsp(&inst, &cfg, &mut r),
            Err(Error::NoFeasibleValue)
        ));
    }

    #[test]
    fn coincident_endpoints_chain_gives_zero() {
        let pts =
            PointSet::from_coords(&[(1.0, 1.0), (1.0, 1.0), (5.0, 5.0)]).unwrap();
        let inst = RspInstance::new(pts, 0, 1, 1.0, false).unwrap();
        assert!(udg_decide(&inst, 0.0));
        let cfg = Config::default();
        let mut r = rng(3);
        assert_eq!(rsp(&inst, &cfg, &mut r).unwrap(), 0.0);
    }

    #[test]
    fn decide_matches_brute_on_random_instances() {
        let mut r = rng(13);
        for trial in 0..60 {
            let weighted = trial % 2 == 0;
            let inst = random_instance(3 + trial % 40, 6.0, weighted, &mut r);
            for _ in 0..4 {
                let sq = r.gen_range(0.0..80.0);
                assert_eq!(
                    udg_decide(&inst, sq),
                    brute_rsp_decide(&inst, sq),
                    "weighted={weighted} sq={sq}"
                );
            }
        }
    }

    #[test]
    fn optimum_matches_brute_on_random_instances() {
        let cfg = Config {
            cutoff_pairs: 64,
            ..Config::default()
        };
        let mut r = rng(19);
        for trial in 0..12 {
            let weighted = trial % 2 == 1;
            let inst = random_instance(4 + trial * 3, 5.0, weighted, &mut r);
            let got = rsp(&inst, &cfg, &mut r);
            let want = brute_rsp(&inst);
            match (got, want) {
                (Ok(g), Ok(w)) => assert_eq!(g, w, "weighted={weighted}"),
                (Err(Error::NoFeasibleValue), Err(Error::NoFeasibleValue)) => {}
                (g, w) => panic!("mismatch: got {g:?}, want {w:?}"),
            }
        }
    }

    #[test]
    fn decide_is_monotone() {
        let mut r = rng(23);
        for _ in 0..20 {
            let inst = random_instance(12, 4.0, false, &mut r);
            let mut prev = false;
            for step in 0..30 {
                let sq = step as f64 * 2.0;
                let now = udg_decide(&inst, sq);
                assert!(!prev || now, "decision flipped back at sq={sq}");
                prev = now;
            }
        }
    }
}
