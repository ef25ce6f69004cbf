//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A coordinate was NaN or infinite at ingestion.
    #[error("non-finite coordinate at index {0}")]
    NonFiniteCoordinate(usize),
    /// An interval violated `0 <= lo <= hi` or contained NaN.
    #[error("invalid squared-distance interval ({0}, {1}]")]
    InvalidInterval(f64, f64),
    /// A rank was outside `1..=n(n-1)/2` (or `1..=m*n` for bipartite input).
    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: u64, max: u64 },
    /// An operation that needs elements got an empty collection.
    #[error("empty collection: {0}")]
    EmptyCollection(&'static str),
    /// Cutting refinement could not meet its conflict bound within the
    /// retry budget; signals pathological degeneracy in the input circles.
    #[error("cutting construction failed: {0}")]
    ConstructionFailure(&'static str),
    /// No candidate value satisfies the decision function.
    #[error("no feasible value: decision is false at the maximum candidate")]
    NoFeasibleValue,
    /// A stage candidate carried more weight than the partition scheme
    /// tolerates (caller-visible contract violation).
    #[error("candidate weight {weight} exceeds bound {bound}")]
    WeightBoundViolated { weight: f64, bound: f64 },
    /// Malformed problem instance (message explains the field).
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
}
