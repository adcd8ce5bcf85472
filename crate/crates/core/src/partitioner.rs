//! Interchangeable vertex partitioners.
//!
//! Every implementation must be orbit-coarse: two vertices in one automorphism orbit always
//! land in one class. The reduction and the isomorphism extraction rely on nothing else.

use crate::error::Result;
use crate::graph::Graph;
use crate::oracle;
use crate::partition::Partition;
use crate::refine;
use crate::series::{self, TruncationPolicy};

pub trait Partitioner: Sync {
    fn partition(&self, g: &Graph) -> Result<Partition>;

    fn name(&self) -> &'static str;
}

/// Series partitioner with a truncation rule derived from the graph order.
#[derive(Clone, Copy, Debug)]
pub enum SeriesDepth {
    /// `m^2` terms.
    Full,
    Fixed(usize),
    /// At most `s_max` terms, stopping once the partition is stable for one more term.
    EarlyStop(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesPartitioner {
    pub depth: SeriesDepth,
}

impl SeriesPartitioner {
    pub fn policy_for(&self, m: usize) -> TruncationPolicy {
        match self.depth {
            SeriesDepth::Full => TruncationPolicy::full(m),
            SeriesDepth::Fixed(s) => TruncationPolicy::fixed(s),
            SeriesDepth::EarlyStop(s) => TruncationPolicy {
                s_max: s,
                early_stop: true,
            },
        }
    }
}

impl Partitioner for SeriesPartitioner {
    fn partition(&self, g: &Graph) -> Result<Partition> {
        Ok(series::a1_partition(g, self.policy_for(g.order())))
    }

    fn name(&self) -> &'static str {
        "a1"
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolicPartitioner;

impl Partitioner for SymbolicPartitioner {
    fn partition(&self, g: &Graph) -> Result<Partition> {
        refine::a1prime_partition(g)
    }

    fn name(&self) -> &'static str {
        "a1prime"
    }
}

/// Exact automorphism orbits: enumeration up to the brute-force cap, backtracking above it.
#[derive(Clone, Copy, Debug, Default)]
pub struct OraclePartitioner;

impl Partitioner for OraclePartitioner {
    fn partition(&self, g: &Graph) -> Result<Partition> {
        if g.order() <= oracle::BRUTEFORCE_MAX {
            Ok(oracle::orbit_partition_bruteforce(g)?.partition)
        } else {
            Ok(oracle::orbit_partition_search(g))
        }
    }

    fn name(&self) -> &'static str {
        "oracle"
    }
}
