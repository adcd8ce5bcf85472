//! Graph isomorphism through the dynamics of points attracted along edges.
//!
//! Each graph on `m` vertices drives a system of `m` points in `R^m` that start at the unit
//! vectors. The Taylor coefficients of the trajectory are exact rationals and are invariant
//! under relabelling, so vertices whose coefficient rows differ cannot share an automorphism
//! orbit. The crate provides the exact series, a symbolic refinement that is at least as
//! fine, a gadget reduction from isomorphism to vertex partitioning, mapping extraction, a
//! numeric integrator and brute-force oracles.

pub mod error;
pub mod format;
pub mod graph;
pub mod iso;
pub mod matrix;
pub mod oracle;
pub mod partition;
pub mod partitioner;
pub mod reduction;
pub mod refine;
pub mod series;
pub mod sim;

pub use error::{Error, Result};
pub use graph::Graph;
pub use iso::{a2_decide, verify_iso, IsoResult, Verdict};
pub use partition::Partition;
pub use partitioner::{
    OraclePartitioner, Partitioner, SeriesDepth, SeriesPartitioner, SymbolicPartitioner,
};
