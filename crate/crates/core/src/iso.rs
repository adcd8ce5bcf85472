//! Yes / No / Don't-know isomorphism decisions with an explicit, verified mapping.
//!
//! Starting from a gadget `Z_0` whose `sigma0` and `tau0` share a class, the chain repeatedly
//! takes the unused `G1` vertex `sigma_j` of largest degree, pairs it with an unused `G2`
//! vertex `tau_j` from its class, and adds the cross edges `{sigma_i, tau_(j-i)}` for
//! `0 <= i <= j`. Paired vertices end up with distinct degrees, so each pair becomes its own
//! class. Once every class is a single `{G1, G2}` pair the classes spell out the mapping.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::partitioner::Partitioner;
use crate::reduction::{build_gadget, gi_decide, GiDecision, NonIsoReason};

/// Gadget chain `Z_0..Z_j` on `V1 = 0..n` and `V2 = n..2n`.
#[derive(Clone, Debug)]
pub struct ZChain {
    pub n: usize,
    /// `G1` as used in the gadget (complemented when the inputs were).
    pub g1: Graph,
    pub graphs: Vec<Graph>,
    pub sigmas: Vec<usize>,
    /// Gadget indices in `n..2n`.
    pub taus: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum ChainStep {
    Extended(ZChain),
    Stuck,
    Done,
}

impl ZChain {
    /// `Z_0` for the bridge `{sigma0, n + tau0}`.
    pub fn start(g1: &Graph, g2: &Graph, tau0: usize) -> Result<ZChain> {
        let gadget = build_gadget(g1, g2, tau0)?;
        Ok(ZChain {
            n: gadget.n,
            g1: g1.clone(),
            graphs: vec![gadget.graph],
            sigmas: vec![gadget.sigma0],
            taus: vec![gadget.tau],
        })
    }

    pub fn current(&self) -> &Graph {
        self.graphs.last().expect("chain starts with Z_0")
    }

    /// Index `p` of the newest graph `Z_p`.
    pub fn length(&self) -> usize {
        self.graphs.len() - 1
    }

    /// Unused `G1` vertex of largest degree, lowest index first.
    pub fn next_sigma(&self) -> Option<usize> {
        (0..self.n)
            .filter(|v| !self.sigmas.contains(v))
            .max_by_key(|&v| (self.g1.degree(v), std::cmp::Reverse(v)))
    }

    /// Unused `G2` vertices sharing `sigma`'s class, ascending.
    pub fn tau_candidates(&self, sigma: usize, partition: &Partition) -> Vec<usize> {
        partition
            .class_of(sigma)
            .iter()
            .copied()
            .filter(|&v| v >= self.n && !self.taus.contains(&v))
            .collect()
    }

    /// Every class is one `G1` vertex together with one `G2` vertex.
    pub fn is_done(&self, partition: &Partition) -> bool {
        partition
            .classes()
            .iter()
            .all(|c| c.len() == 2 && c[0] < self.n && c[1] >= self.n)
    }

    /// `Z_(j+1)` with `sigma_(j+1) = sigma` and `tau_(j+1) = tau`.
    pub fn extended(&self, sigma: usize, tau: usize) -> Result<ZChain> {
        if sigma >= self.n || self.sigmas.contains(&sigma) {
            return Err(Error::Contract(format!(
                "sigma {sigma} is used or outside G1"
            )));
        }
        if tau < self.n || tau >= 2 * self.n || self.taus.contains(&tau) {
            return Err(Error::Contract(format!("tau {tau} is used or outside G2")));
        }
        let mut next = self.clone();
        next.sigmas.push(sigma);
        next.taus.push(tau);
        let j = next.sigmas.len() - 1;
        let mut z = self.current().clone();
        for i in 0..=j {
            z.set_edge(next.sigmas[i], next.taus[j - i], true);
        }
        debug_assert!(z.is_doubly_connected(), "Z_{j} must be doubly connected");
        debug_assert!(
            (1..=j).all(|i| z.degree(next.sigmas[i - 1]) > z.degree(next.sigmas[i])),
            "paired degrees must strictly decrease along the chain"
        );
        next.graphs.push(z);
        Ok(next)
    }
}

/// Advances the chain by one step using the first admissible `tau`.
pub fn extend_chain(chain: &ZChain, partition: &Partition) -> Result<ChainStep> {
    if partition.vertex_count() != 2 * chain.n {
        return Err(Error::Contract(
            "partition does not match the chain's graph".into(),
        ));
    }
    if chain.is_done(partition) {
        return Ok(ChainStep::Done);
    }
    if chain.length() + 2 > chain.n {
        return Ok(ChainStep::Stuck);
    }
    let Some(sigma) = chain.next_sigma() else {
        return Ok(ChainStep::Stuck);
    };
    match chain.tau_candidates(sigma, partition).first() {
        Some(&tau) => Ok(ChainStep::Extended(chain.extended(sigma, tau)?)),
        None => Ok(ChainStep::Stuck),
    }
}

/// Reads `gamma: V1 -> V2` (local `G2` indices) off a partition of cross pairs.
pub fn read_gamma(chain: &ZChain, partition: &Partition) -> Result<Vec<usize>> {
    let n = chain.n;
    let mut gamma = vec![usize::MAX; n];
    for class in partition.classes() {
        match class[..] {
            [a, b] if a < n && b >= n && b < 2 * n => gamma[a] = b - n,
            _ => {
                return Err(Error::Contract(format!(
                    "class {class:?} is not a single G1/G2 pair"
                )))
            }
        }
    }
    Ok(gamma)
}

/// `gamma` is a bijection and maps adjacency of `g1` exactly onto adjacency of `g2`.
pub fn verify_iso(g1: &Graph, g2: &Graph, gamma: &[usize]) -> Result<bool> {
    let n = g1.order();
    if g2.order() != n || gamma.len() != n {
        return Err(Error::Contract(format!(
            "mapping of length {} between graphs of order {n} and {}",
            gamma.len(),
            g2.order()
        )));
    }
    crate::graph::check_permutation(gamma, n)?;
    Ok((0..n).all(|u| ((u + 1)..n).all(|v| g1.has_edge(u, v) == g2.has_edge(gamma[u], gamma[v]))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    DontKnow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    OrderMismatch,
    DegreeMismatch,
    ConnectivityMismatch,
    /// The partitioner separated `sigma0` from every candidate.
    Separated,
    /// Mapping read off the chain and checked edge by edge.
    Verified,
    /// Every chain got stuck or produced a mapping that failed verification.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub j: usize,
    pub sigma: usize,
    /// Local `G2` index.
    pub tau: usize,
    /// Partition of `Z_j` the next step was chosen from.
    pub partition: Partition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptOutcome {
    Done,
    Stuck,
    VerificationFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainAttempt {
    pub tau0: usize,
    pub steps: Vec<StepRecord>,
    pub outcome: AttemptOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoResult {
    pub verdict: Verdict,
    pub reason: Reason,
    /// `gamma[v]` is the `G2` image of `G1` vertex `v`; present iff the verdict is `Yes`.
    pub gamma: Option<Vec<usize>>,
    pub partitioner: &'static str,
    /// The inputs were both disconnected and the chain ran on their complements.
    pub complemented: bool,
    pub attempts: Vec<ChainAttempt>,
}

impl IsoResult {
    fn plain(verdict: Verdict, reason: Reason, partitioner: &'static str) -> Self {
        IsoResult {
            verdict,
            reason,
            gamma: None,
            partitioner,
            complemented: false,
            attempts: vec![],
        }
    }

    pub fn order_mismatch(partitioner: &'static str) -> Self {
        IsoResult::plain(Verdict::No, Reason::OrderMismatch, partitioner)
    }
}

pub fn a2_decide(g1: &Graph, g2: &Graph, partitioner: &dyn Partitioner) -> Result<IsoResult> {
    let name = partitioner.name();
    let outcome = gi_decide(g1, g2, partitioner)?;
    let taus = match outcome.decision {
        GiDecision::DegreeMismatch => {
            return Ok(IsoResult::plain(Verdict::No, Reason::DegreeMismatch, name))
        }
        GiDecision::NotIsomorphic { reason } => {
            let reason = match reason {
                NonIsoReason::ConnectivityMismatch => Reason::ConnectivityMismatch,
                NonIsoReason::Separated => Reason::Separated,
            };
            let mut result = IsoResult::plain(Verdict::No, reason, name);
            result.complemented = outcome.prepared.is_some_and(|p| p.complemented);
            return Ok(result);
        }
        GiDecision::PossiblyIsomorphic { taus } => taus,
    };
    let prepared = outcome
        .prepared
        .expect("prepared graphs accompany candidates");
    let mut result = IsoResult::plain(Verdict::DontKnow, Reason::Inconclusive, name);
    result.complemented = prepared.complemented;

    for tau0 in taus {
        let partition = outcome
            .gadget_partitions
            .iter()
            .find(|(t, _)| *t == tau0)
            .map(|(_, p)| p.clone())
            .expect("every surviving tau has a gadget partition");
        let chain = ZChain::start(&prepared.g1, &prepared.g2, tau0)?;
        let (attempt, gamma) = run_chain(chain, partition, partitioner)?;
        let gamma = match gamma {
            Some(gamma) if verify_iso(g1, g2, &gamma)? => Some(gamma),
            Some(_) => {
                result.attempts.push(ChainAttempt {
                    outcome: AttemptOutcome::VerificationFailed,
                    ..attempt
                });
                continue;
            }
            None => None,
        };
        result.attempts.push(attempt);
        if let Some(gamma) = gamma {
            result.verdict = Verdict::Yes;
            result.reason = Reason::Verified;
            result.gamma = Some(gamma);
            break;
        }
    }
    Ok(result)
}

/// Runs one chain to completion. At each step every admissible `tau` is tried in order and
/// the first one that stays in `sigma`'s class after repartitioning is kept.
fn run_chain(
    mut chain: ZChain,
    mut partition: Partition,
    partitioner: &dyn Partitioner,
) -> Result<(ChainAttempt, Option<Vec<usize>>)> {
    let n = chain.n;
    let tau0 = chain.taus[0] - n;
    let mut steps = vec![StepRecord {
        j: 0,
        sigma: chain.sigmas[0],
        tau: tau0,
        partition: partition.clone(),
    }];
    let finish = |steps, outcome| ChainAttempt {
        tau0,
        steps,
        outcome,
    };
    loop {
        if chain.is_done(&partition) {
            let gamma = read_gamma(&chain, &partition)?;
            return Ok((finish(steps, AttemptOutcome::Done), Some(gamma)));
        }
        if chain.length() + 2 > n {
            return Ok((finish(steps, AttemptOutcome::Stuck), None));
        }
        let Some(sigma) = chain.next_sigma() else {
            return Ok((finish(steps, AttemptOutcome::Stuck), None));
        };
        let mut accepted = None;
        for tau in chain.tau_candidates(sigma, &partition) {
            let next = chain.extended(sigma, tau)?;
            let p = partitioner.partition(next.current())?;
            if p.same_class(sigma, tau) {
                accepted = Some((next, p));
                break;
            }
        }
        let Some((next, p)) = accepted else {
            return Ok((finish(steps, AttemptOutcome::Stuck), None));
        };
        chain = next;
        partition = p;
        steps.push(StepRecord {
            j: chain.length(),
            sigma,
            tau: chain.taus.last().unwrap() - n,
            partition: partition.clone(),
        });
    }
}
