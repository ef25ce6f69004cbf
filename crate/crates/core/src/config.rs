//! Tuning constants shared by the cutting, range-searching, selection and
//! optimization layers. Defaults are the validated settings; every field
//! can be overridden per call.

/// Strategy used by [`crate::selection::count_pairs_at_most`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountStrategy {
    /// All-pairs scan, O(n^2).
    Brute,
    /// Uniform grid of cell width delta with 3x3 neighborhood scans.
    Grid,
    /// Complete batched range search on `(0, delta^2]`.
    Brs,
}

/// Shared tuning knobs.
#[derive(Debug, Clone)]
pub struct Config {
    /// Refinement ratio between consecutive cutting levels.
    pub rho: f64,
    /// Per-cell sample size is `sample_base * rho` circles (doubled on retry).
    pub sample_base: usize,
    /// Conflict bound at level i is `slack * |circles| / rho^i`.
    pub slack: f64,
    /// Re-split attempts per cell before construction fails.
    pub split_retries: u32,
    /// Scan cutoff: blocks with `|A|*|B|` at most this are resolved by a
    /// direct pair scan instead of a cutting; the scan is linear in the
    /// block size while a cutting has a large fixed cost.
    pub cutoff_pairs: u64,
    /// Degree of the stage expander multigraphs (even).
    pub expander_degree: usize,
    /// Scale on the final-stage / enumeration thresholds.
    pub c_thresh: f64,
    /// Stage guard: selection and optimization fall back to enumeration
    /// after `c_guard * log2(n)` stages.
    pub c_guard: f64,
    /// Counting strategy used by the selection decision oracle.
    pub count_strategy: CountStrategy,
    /// Sample-size scale for the interval-shrinking acceptance test.
    pub c2: f64,
    /// Sample-size scale for the interval-shrinking narrowing step.
    pub c_r: f64,
    /// Interval shrinking gives up (low confidence) after
    /// `c_rounds * log2(m+n)` rounds.
    pub c_rounds: f64,
    /// Rejection sampling attempts per requested value are capped at
    /// `rejection_cap` times the request size.
    pub rejection_cap: usize,
    /// The randomized optimizer reruns shrinking while the materialized
    /// candidate count exceeds `c_retry * L`.
    pub c_retry: f64,
    /// Hard cap on shrink reruns inside the randomized optimizer.
    pub max_shrink_reruns: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            rho: 2.0,
            sample_base: 6,
            slack: 4.0,
            split_retries: 8,
            cutoff_pairs: 262144,
            expander_degree: 16,
            c_thresh: 1.0,
            c_guard: 4.0,
            count_strategy: CountStrategy::Grid,
            c2: 8.0,
            c_r: 8.0,
            c_rounds: 4.0,
            rejection_cap: 64,
            c_retry: 4.0,
            max_shrink_reruns: 16,
        }
    }
}

/// log2 with the argument clamped to at least 2, so parameter formulas
/// never divide by zero or go negative on tiny inputs.
pub(crate) fn safe_log2(x: f64) -> f64 {
    x.max(2.0).log2()
}
