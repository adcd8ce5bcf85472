mod common;

use proptest::prelude::*;
use rand::Rng;

use dyniso::format::{parse_graph, to_graph6, Format};
use dyniso::iso::{a2_decide, Verdict};
use dyniso::oracle::orbit_partition_bruteforce;
use dyniso::partitioner::{OraclePartitioner, SymbolicPartitioner};
use dyniso::reduction::{build_gadget, candidate_taus, select_sigma0};
use dyniso::refine::a1prime_partition;
use dyniso::series::{coefficient_digits, series_up_to, TruncationPolicy};
use dyniso::sim;
use dyniso::{Graph, Partition};

use common::*;

/// Straight-line graph6 reader for small orders.
fn decode_graph6(s: &str) -> Graph {
    let bytes: Vec<u8> = s.trim().bytes().map(|b| b - 63).collect();
    assert!(bytes[0] < 63, "only single-byte orders");
    let n = bytes[0] as usize;
    let bits: Vec<bool> = bytes[1..]
        .iter()
        .flat_map(|b| (0..6).rev().map(move |k| b >> k & 1 == 1))
        .collect();
    let mut edges = vec![];
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = vec![];
            let mut k = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn arb_graph_and_perm(max: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(max).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn mapped(p: &Partition, perm: &[usize]) -> Partition {
    let classes = p
        .classes()
        .iter()
        .map(|c| c.iter().map(|&v| perm[v]).collect())
        .collect();
    Partition::from_classes(p.vertex_count(), classes).unwrap()
}

proptest! {
    #[test]
    fn graph6_matches_reference_decoder(g in arb_graph(20)) {
        let text = to_graph6(&g);
        prop_assert_eq!(decode_graph6(&text), g.clone());
        prop_assert_eq!(parse_graph(&text, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn refinement_partition_is_relabelling_invariant((g, perm) in arb_graph_and_perm(7)) {
        let h = g.relabel(&perm).unwrap();
        let p = a1prime_partition(&g).unwrap();
        prop_assert_eq!(mapped(&p, &perm), a1prime_partition(&h).unwrap());
    }

    #[test]
    fn series_partition_is_relabelling_invariant((g, perm) in arb_graph_and_perm(6)) {
        let h = g.relabel(&perm).unwrap();
        let policy = TruncationPolicy::fixed(6);
        let p = dyniso::series::a1_partition(&g, policy);
        prop_assert_eq!(mapped(&p, &perm), dyniso::series::a1_partition(&h, policy));
    }

    #[test]
    fn relabelled_copies_are_recognised((g, perm) in arb_graph_and_perm(7)) {
        prop_assume!(g.order() >= 2);
        let h = g.relabel(&perm).unwrap();
        let r = a2_decide(&g, &h, &OraclePartitioner).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Yes);
        prop_assert!(dyniso::verify_iso(&g, &h, r.gamma.as_ref().unwrap()).unwrap());
    }
}

#[test]
fn complements_preserve_isomorphism_and_orbits() {
    for n in 1..=6 {
        let graphs = all_graphs(n);
        for g in &graphs {
            assert!(g.is_connected() || g.complement().is_connected(), "{g:?}");
            let orbits = orbit_partition_bruteforce(g).unwrap();
            let co = orbit_partition_bruteforce(&g.complement()).unwrap();
            assert_eq!(orbits, co);
        }
        let mut masks: Vec<u64> = graphs
            .iter()
            .map(|g| canonical_mask(&g.complement()))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        assert_eq!(
            masks.len(),
            graphs.len(),
            "complement is a bijection on classes, n = {n}"
        );
    }
    let mut rng = rng(11);
    for _ in 0..40 {
        let g = random_graph(&mut rng, 7, 0.5);
        let h = g.relabel(&random_perm(&mut rng, 7)).unwrap();
        assert_eq!(
            canonical_mask(&g.complement()),
            canonical_mask(&h.complement())
        );
        assert!(g.is_connected() || g.complement().is_connected());
    }
}

#[test]
fn every_gadget_is_doubly_connected() {
    let mut rng = rng(12);
    let mut built = 0;
    while built < 60 {
        let n = rng.gen_range(2..=8);
        let g1 = random_graph(&mut rng, n, 0.5);
        let g2 = g1.relabel(&random_perm(&mut rng, n)).unwrap();
        if !g1.is_connected() {
            continue;
        }
        let d0 = g1.degree(select_sigma0(&g1));
        for tau in candidate_taus(&g2, d0) {
            let gadget = build_gadget(&g1, &g2, tau).unwrap();
            assert!(gadget.graph.is_doubly_connected());
            assert_eq!(gadget.graph.edge_count(), 2 * g1.edge_count() + 1);
            built += 1;
        }
    }
}

#[test]
fn orbit_partition_refines_refinement_on_random_graphs() {
    let mut rng = rng(13);
    for _ in 0..60 {
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, 7, p);
        let orbits = orbit_partition_bruteforce(&g).unwrap().partition;
        assert!(orbits.refines(&a1prime_partition(&g).unwrap()), "{g:?}");
        assert!(orbits.refines(&dyniso::series::a1_partition(
            &g,
            TruncationPolicy::fixed(6)
        )));
    }
}

#[test]
fn coefficient_size_grows_slowly() {
    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)]).unwrap();
    let digits = coefficient_digits(&series_up_to(&g, TruncationPolicy::fixed(24)));
    let bound = |n: usize| (n as f64) * (n as f64).ln().max(1.0);
    let c = (1..=6)
        .map(|n| digits[n] as f64 / bound(n))
        .fold(0.0, f64::max);
    for n in 7..digits.len() {
        assert!(
            (digits[n] as f64) <= 2.0 * c * bound(n),
            "term {n}: {} digits against fitted {c:.2} n log n",
            digits[n]
        );
    }
}

#[test]
fn petersen_and_relabelled_copy() {
    let g = petersen();
    assert_eq!(srg_parameters(&g), Some((10, 3, 0, 1)));
    assert_eq!(a1prime_partition(&g).unwrap(), Partition::unit(10));
    let h = g.relabel(&[3, 7, 0, 9, 1, 5, 8, 2, 6, 4]).unwrap();
    let r = a2_decide(&g, &h, &SymbolicPartitioner).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    assert!(dyniso::verify_iso(&g, &h, r.gamma.as_ref().unwrap()).unwrap());
}

#[test]
fn cycle_refinement_matches_orbits() {
    let g = Graph::cycle(5);
    assert_eq!(a1prime_partition(&g).unwrap(), Partition::unit(5));
    let tail = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5)]).unwrap();
    assert_eq!(
        a1prime_partition(&tail).unwrap(),
        orbit_partition_bruteforce(&tail).unwrap().partition
    );
}

#[test]
fn distance_signatures_do_not_separate_srg_pair() {
    let a = sim::distance_signature(&sim::simulate(&shrikhande(), 1.0, 1e-3).unwrap());
    let b = sim::distance_signature(&sim::simulate(&rook4(), 1.0, 1e-3).unwrap());
    let gap = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(gap < 1e-9, "signature gap {gap:e}");
}

#[test]
fn numeric_equivariance_on_random_graphs() {
    let mut rng = rng(14);
    for _ in 0..10 {
        let g = random_graph(&mut rng, 5, 0.5);
        let perm = random_perm(&mut rng, 5);
        assert!(sim::check_equivariance(&g, &perm, 1.0, 1e-3).unwrap() <= 1e-8);
    }
}

#[test]
fn asymmetric_graph_has_trivial_group() {
    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)]).unwrap();
    let orbits = orbit_partition_bruteforce(&g).unwrap();
    // swapping 1 and 2 with 0<->3 fails because 3 has the tail 4
    assert_eq!(orbits.group_size, 1);
    assert_eq!(a1prime_partition(&g).unwrap(), Partition::discrete(6));
}
