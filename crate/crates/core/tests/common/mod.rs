#![allow(dead_code)]

use std::collections::HashSet;

use dyniso::oracle::next_permutation;
use dyniso::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect()
}

pub fn from_mask(n: usize, mask: u64) -> Graph {
    let edges: Vec<(usize, usize)> = pair_index(n)
        .into_iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn mask_under(g: &Graph, perm: &[usize], pairs: &[(usize, usize)], index: &[Vec<usize>]) -> u64 {
    let mut mask = 0u64;
    for &(u, v) in pairs {
        if g.has_edge(u, v) {
            mask |= 1 << index[perm[u]][perm[v]];
        }
    }
    mask
}

/// Smallest edge mask over all relabellings; equal iff isomorphic.
pub fn canonical_mask(g: &Graph) -> u64 {
    let n = g.order();
    let pairs = pair_index(n);
    let mut index = vec![vec![0; n]; n];
    for (b, &(u, v)) in pairs.iter().enumerate() {
        index[u][v] = b;
        index[v][u] = b;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        best = best.min(mask_under(g, &perm, &pairs, &index));
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

/// One graph per isomorphism class on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let edges = n * n.saturating_sub(1) / 2;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0..(1u64 << edges) {
        let g = from_mask(n, mask);
        // orderly generation: only a class's own minimum survives
        if canonical_mask(&g) == mask && seen.insert(mask) {
            out.push(g);
        }
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = pair_index(n)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Cayley graph on Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}.
pub fn shrikhande() -> Graph {
    let mut edges = vec![];
    for a in 0..16usize {
        for b in (a + 1)..16 {
            let (dx, dy) = ((b / 4 + 4 - a / 4) % 4, (b % 4 + 4 - a % 4) % 4);
            if matches!(
                (dx, dy),
                (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3)
            ) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(16, &edges).unwrap()
}

/// K4 x K4.
pub fn rook4() -> Graph {
    latin_square_graph(
        &[
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ],
        false,
    )
}

/// Cells of a Latin square, adjacent when they share a row, a column or (optionally) a symbol.
pub fn latin_square_graph(square: &[Vec<usize>], symbols: bool) -> Graph {
    let k = square.len();
    let mut edges = vec![];
    for a in 0..k * k {
        for b in (a + 1)..k * k {
            let (ra, ca, rb, cb) = (a / k, a % k, b / k, b % k);
            if ra == rb || ca == cb || (symbols && square[ra][ca] == square[rb][cb]) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(k * k, &edges).unwrap()
}

pub fn is_latin(square: &[Vec<usize>]) -> bool {
    let k = square.len();
    (0..k).all(|i| {
        let row: HashSet<usize> = square[i].iter().copied().collect();
        let col: HashSet<usize> = (0..k).map(|r| square[r][i]).collect();
        row.len() == k && col.len() == k && square[i].iter().all(|&x| x < k)
    })
}

pub fn cyclic_square(k: usize) -> Vec<Vec<usize>> {
    (0..k)
        .map(|r| (0..k).map(|c| (r + c) % k).collect())
        .collect()
}

/// Order-5 Latin square that is not isotopic to the cyclic one (it has intercalates).
pub fn noncyclic_square5() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 3, 4, 0, 1],
        vec![3, 4, 1, 2, 0],
        vec![4, 2, 0, 1, 3],
    ]
}

pub fn count_cliques(g: &Graph, k: usize) -> usize {
    fn grow(g: &Graph, clique: &mut Vec<usize>, start: usize, k: usize) -> usize {
        if clique.len() == k {
            return 1;
        }
        let mut total = 0;
        for v in start..g.order() {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
                total += grow(g, clique, v + 1, k);
                clique.pop();
            }
        }
        total
    }
    grow(g, &mut vec![], 0, k)
}

pub fn petersen() -> Graph {
    let mut edges = vec![];
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

/// Strongly regular parameters `(n, k, lambda, mu)`, if any.
pub fn srg_parameters(g: &Graph) -> Option<(usize, usize, usize, usize)> {
    let n = g.order();
    let k = g.degree(0);
    if g.degrees().iter().any(|&d| d != k) {
        return None;
    }
    let (mut lambda, mut mu) = (None, None);
    for u in 0..n {
        for v in (u + 1)..n {
            let common = (0..n)
                .filter(|&w| g.has_edge(u, w) && g.has_edge(v, w))
                .count();
            let slot = if g.has_edge(u, v) {
                &mut lambda
            } else {
                &mut mu
            };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return None,
                _ => {}
            }
        }
    }
    Some((n, k, lambda.unwrap_or(0), mu.unwrap_or(0)))
}
