//! Isomorphism of two graphs reduced to partitioning doubly connected gadget graphs.
//!
//! For connected `G1`, `G2` on `n` vertices, pick `sigma0` of maximum degree `d0` in `G1`. For
//! each `tau` of degree `d0` in `G2`, the gadget is the disjoint union joined by the single
//! bridge `{sigma0, tau}`. The graphs are isomorphic iff `sigma0` and `tau` share an
//! automorphism orbit of some gadget. With an orbit-coarse partitioner, a gadget that
//! separates them rules that `tau` out; if every `tau` is ruled out the graphs are not
//! isomorphic.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{degree_partitions_equivalent, Graph};
use crate::partition::Partition;
use crate::partitioner::Partitioner;

/// `G1` on `0..n`, `G2` on `n..2n`, plus the bridge `{sigma0, tau}`.
#[derive(Clone, Debug)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub n: usize,
    pub sigma0: usize,
    /// Gadget index of the bridged `G2` vertex (`n + local index`).
    pub tau: usize,
}

impl GadgetGraph {
    pub fn bridge(&self) -> (usize, usize) {
        (self.sigma0, self.tau)
    }
}

/// Lowest-index vertex of maximum degree.
pub fn select_sigma0(g1: &Graph) -> usize {
    let degrees = g1.degrees();
    let max = degrees.iter().copied().max().unwrap_or(0);
    degrees.iter().position(|&d| d == max).unwrap_or(0)
}

/// `G2` vertices of degree exactly `d0`, ascending.
pub fn candidate_taus(g2: &Graph, d0: usize) -> Vec<usize> {
    (0..g2.order()).filter(|&v| g2.degree(v) == d0).collect()
}

pub fn build_gadget(g1: &Graph, g2: &Graph, tau: usize) -> Result<GadgetGraph> {
    let n = g1.order();
    if g2.order() != n || n < 2 {
        return Err(Error::Contract(format!(
            "gadget needs two graphs of equal order > 1, got {} and {}",
            n,
            g2.order()
        )));
    }
    if !g1.is_connected() || !g2.is_connected() {
        return Err(Error::Contract("gadget inputs must be connected".into()));
    }
    let sigma0 = select_sigma0(g1);
    let d0 = g1.degree(sigma0);
    if tau >= n || g2.degree(tau) != d0 {
        return Err(Error::Contract(format!(
            "tau = {tau} must be a G2 vertex of degree {d0}"
        )));
    }
    let mut graph = g1.disjoint_union(g2);
    graph.set_edge(sigma0, n + tau, true);
    debug_assert!(
        graph.is_doubly_connected(),
        "gadget must be doubly connected"
    );
    Ok(GadgetGraph {
        graph,
        n,
        sigma0,
        tau: n + tau,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonIsoReason {
    /// Exactly one of the graphs is connected.
    ConnectivityMismatch,
    /// Every candidate `tau` was separated from `sigma0`.
    Separated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GiDecision {
    DegreeMismatch,
    NotIsomorphic {
        reason: NonIsoReason,
    },
    /// Candidates (local `G2` indices) whose gadget keeps `sigma0` and `tau` together.
    PossiblyIsomorphic {
        taus: Vec<usize>,
    },
}

/// Graphs actually handed to the gadget construction.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub g1: Graph,
    pub g2: Graph,
    /// Both inputs were disconnected and have been replaced by their complements.
    pub complemented: bool,
}

#[derive(Clone, Debug)]
pub struct GiOutcome {
    pub decision: GiDecision,
    pub prepared: Option<Prepared>,
    pub sigma0: Option<usize>,
    /// Partition of each examined gadget, in candidate order.
    pub gadget_partitions: Vec<(usize, Partition)>,
}

impl GiOutcome {
    pub fn partitioner_calls(&self) -> usize {
        self.gadget_partitions.len()
    }
}

/// Applies the degree and connectivity prechecks, complementing disconnected pairs.
pub fn prepare(g1: &Graph, g2: &Graph) -> Result<std::result::Result<Prepared, GiDecision>> {
    let n = g1.order();
    if g2.order() != n || n <= 1 {
        return Err(Error::Contract(format!(
            "isomorphism reduction needs equal orders > 1, got {n} and {}",
            g2.order()
        )));
    }
    if !degree_partitions_equivalent(g1, g2) {
        return Ok(Err(GiDecision::DegreeMismatch));
    }
    match (g1.is_connected(), g2.is_connected()) {
        (true, true) => Ok(Ok(Prepared {
            g1: g1.clone(),
            g2: g2.clone(),
            complemented: false,
        })),
        (false, false) => Ok(Ok(Prepared {
            g1: g1.complement(),
            g2: g2.complement(),
            complemented: true,
        })),
        _ => Ok(Err(GiDecision::NotIsomorphic {
            reason: NonIsoReason::ConnectivityMismatch,
        })),
    }
}

pub fn gi_decide(g1: &Graph, g2: &Graph, partitioner: &dyn Partitioner) -> Result<GiOutcome> {
    let prepared = match prepare(g1, g2)? {
        Ok(p) => p,
        Err(decision) => {
            return Ok(GiOutcome {
                decision,
                prepared: None,
                sigma0: None,
                gadget_partitions: vec![],
            })
        }
    };
    let sigma0 = select_sigma0(&prepared.g1);
    let taus = candidate_taus(&prepared.g2, prepared.g1.degree(sigma0));
    let results: Vec<Result<(usize, Partition)>> = taus
        .par_iter()
        .map(|&tau| {
            let gadget = build_gadget(&prepared.g1, &prepared.g2, tau)?;
            Ok((tau, partitioner.partition(&gadget.graph)?))
        })
        .collect();
    let gadget_partitions = results.into_iter().collect::<Result<Vec<_>>>()?;
    let n = prepared.g1.order();
    let surviving: Vec<usize> = gadget_partitions
        .iter()
        .filter(|(tau, p)| p.same_class(sigma0, n + tau))
        .map(|(tau, _)| *tau)
        .collect();
    let decision = if surviving.is_empty() {
        GiDecision::NotIsomorphic {
            reason: NonIsoReason::Separated,
        }
    } else {
        GiDecision::PossiblyIsomorphic { taus: surviving }
    };
    Ok(GiOutcome {
        decision,
        prepared: Some(prepared),
        sigma0: Some(sigma0),
        gadget_partitions,
    })
}
