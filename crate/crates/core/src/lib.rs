//! Planar interpoint-distance selection and optimization.
//!
//! The library answers questions about the multiset of pairwise Euclidean
//! distances of planar point sets without enumerating all pairs: selecting
//! the k-th smallest distance (monochromatic or bipartite), and minimizing
//! a monotone decision function over realized distances. The workhorse is
//! batched range searching over distance annuli, built from hierarchical
//! cuttings of circle arrangements; on top of it sit a deterministic
//! expander-stage optimizer and a randomized interval-shrinking optimizer,
//! applied to discrete Frechet distance with shortcuts and to reverse
//! shortest paths in unit-disk graphs.
//!
//! All distance comparisons are performed on squared values. Intervals of
//! squared distances are half-open `(lo, hi]`, and every reported optimum
//! is an exact member of the instance's candidate multiset.

pub mod brs;
pub mod config;
pub mod cuttings;
pub mod dfd;
pub mod error;
pub mod framework;
pub mod geom;
pub mod oracle;
pub mod selection;
pub mod udg;

pub use config::Config;
pub use error::Error;
pub use geom::{sq_dist, Point, PointSequence, PointSet, Rng, SqInterval};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
