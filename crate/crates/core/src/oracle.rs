//! Ground truth for small graphs: automorphism orbits and isomorphisms by search.
//!
//! [`orbit_partition_bruteforce`] and [`isomorphism_bruteforce`] enumerate every permutation
//! and are capped at [`BRUTEFORCE_MAX`] vertices. [`orbit_partition_search`] is an exact
//! backtracking variant for the doubled gadget graphs built by the reduction, which exceed
//! that cap.

use crate::error::{Error, Result};
use crate::graph::{degree_partitions_equivalent, Graph};
use crate::partition::Partition;

pub const BRUTEFORCE_MAX: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub partition: Partition,
    pub group_size: u64,
}

/// Advances `p` to the next permutation in lexicographic order. Returns false after the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Adjacency of `u, v` in `g1` equals adjacency of `map[u], map[v]` in `g2`, for all pairs.
pub fn preserves_adjacency(g1: &Graph, g2: &Graph, map: &[usize]) -> bool {
    let n = g1.order();
    (0..n).all(|u| ((u + 1)..n).all(|v| g1.has_edge(u, v) == g2.has_edge(map[u], map[v])))
}

/// Orbits of the full automorphism group, found by enumerating all `n!` permutations.
pub fn orbit_partition_bruteforce(g: &Graph) -> Result<OrbitPartition> {
    let n = g.order();
    if n > BRUTEFORCE_MAX {
        return Err(Error::TooLarge {
            n,
            max: BRUTEFORCE_MAX,
        });
    }
    let mut uf = UnionFind::new(n);
    let mut group_size = 0u64;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if preserves_adjacency(g, g, &perm) {
            group_size += 1;
            for (v, &w) in perm.iter().enumerate() {
                uf.union(v, w);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(OrbitPartition {
        partition: uf.partition(),
        group_size,
    })
}

/// First isomorphism `g1 -> g2` in lexicographic order of the image vector, if any.
pub fn isomorphism_bruteforce(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    let n = g1.order();
    if g2.order() != n {
        return Err(Error::Contract(format!(
            "isomorphism search between graphs of order {n} and {}",
            g2.order()
        )));
    }
    if n > BRUTEFORCE_MAX {
        return Err(Error::TooLarge {
            n,
            max: BRUTEFORCE_MAX,
        });
    }
    if g1.edge_count() != g2.edge_count() || !degree_partitions_equivalent(g1, g2) {
        return Ok(None);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if preserves_adjacency(g1, g2, &perm) {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// An automorphism of `g` mapping `from` to `to`, found by backtracking.
pub fn automorphism_mapping(g: &Graph, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = g.order();
    let degrees = g.degrees();
    if degrees[from] != degrees[to] {
        return None;
    }
    // assign in BFS order from `from` so each new vertex is constrained by an assigned neighbour
    let mut order = vec![from];
    let mut queued = vec![false; n];
    queued[from] = true;
    let mut head = 0;
    while order.len() < n {
        if head == order.len() {
            let next = (0..n).find(|&v| !queued[v]).unwrap();
            queued[next] = true;
            order.push(next);
        }
        let u = order[head];
        head += 1;
        for v in g.neighbors(u) {
            if !queued[v] {
                queued[v] = true;
                order.push(v);
            }
        }
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[from] = to;
    used[to] = true;
    if extend(g, &degrees, &order, 1, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

fn extend(
    g: &Graph,
    degrees: &[usize],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..g.order() {
        if used[w] || degrees[w] != degrees[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == g.has_edge(image[u], w));
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if extend(g, degrees, order, depth + 1, image, used) {
            return true;
        }
        used[w] = false;
        image[v] = usize::MAX;
    }
    false
}

/// Exact automorphism orbits by backtracking; no size cap, exponential in the worst case.
pub fn orbit_partition_search(g: &Graph) -> Partition {
    let n = g.order();
    let mut uf = UnionFind::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if uf.find(u) == uf.find(v) {
                continue;
            }
            if let Some(pi) = automorphism_mapping(g, u, v) {
                for (x, &y) in pi.iter().enumerate() {
                    uf.union(x, y);
                }
            }
        }
    }
    uf.partition()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|v| self.find(v)).collect();
        Partition::from_keys(&roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_permutations() {
        let mut p = vec![0, 1, 2];
        let mut all = vec![p.clone()];
        while next_permutation(&mut p) {
            all.push(p.clone());
        }
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn triangle_and_path_orbits() {
        let k3 = orbit_partition_bruteforce(&Graph::complete(3)).unwrap();
        assert_eq!(k3.group_size, 6);
        assert_eq!(k3.partition, Partition::unit(3));
        let p3 = orbit_partition_bruteforce(&Graph::path(3)).unwrap();
        assert_eq!(p3.group_size, 2);
        assert_eq!(p3.partition.classes(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn asymmetric_graph_has_trivial_group() {
        // smallest asymmetric graphs have 6 vertices: a path 0-1-2-3-4 with 5 joined to 1 and 2
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)]).unwrap();
        let orbits = orbit_partition_bruteforce(&g).unwrap();
        assert_eq!(orbits.group_size, 1);
        assert_eq!(orbits.partition, Partition::discrete(6));
        assert_eq!(orbit_partition_search(&g), Partition::discrete(6));
    }

    #[test]
    fn refuses_large_graphs() {
        assert_eq!(
            orbit_partition_bruteforce(&Graph::empty(10)),
            Err(Error::TooLarge { n: 10, max: 9 })
        );
    }

    #[test]
    fn isomorphisms() {
        assert_eq!(
            isomorphism_bruteforce(&Graph::complete(3), &Graph::complete(3)).unwrap(),
            Some(vec![0, 1, 2])
        );
        let two_triangles = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_eq!(
            isomorphism_bruteforce(&Graph::cycle(6), &two_triangles).unwrap(),
            None
        );
        assert!(isomorphism_bruteforce(&Graph::empty(2), &Graph::empty(3)).is_err());
    }

    #[test]
    fn search_matches_bruteforce_on_petersen_sized_cases() {
        let c8 = Graph::cycle(8);
        assert_eq!(
            orbit_partition_search(&c8),
            orbit_partition_bruteforce(&c8).unwrap().partition
        );
        let star = Graph::star(7, 3);
        assert_eq!(
            orbit_partition_search(&star).classes(),
            &[vec![0, 1, 2, 4, 5, 6], vec![3]]
        );
    }
}
