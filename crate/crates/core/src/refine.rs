//! Symbolic refinement: the combinatorial shadow of the series recurrence.
//!
//! Every ordered vertex pair `(i, j)` carries a colour `C[i][j]` standing for the function
//! `x_ij(t)`. A step first colours each pair by the sorted vector of coordinate pairs
//! `(C[i][l], C[j][l])`, which stands for the squared distance between points `i` and `j`,
//! and then recolours `(i, j)` by the sorted vector of tuples
//! `(C[i][j], C[k][j], D[i][k], h_ik)` over all `k`, which mirrors the right-hand side of
//! the equations of motion. Colours are dense ids numbered by first occurrence in row-major
//! order, so equal partitions of the cells give identical matrices.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::partition::Partition;

pub type ColorMatrix = Matrix<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementState {
    /// Cell colours, the `x_ij` analogue.
    pub c: ColorMatrix,
    /// Pair-distance colours for the current `c`.
    pub d: Option<ColorMatrix>,
    pub step: usize,
}

/// Identity pattern: colour 0 on the diagonal, 1 elsewhere.
pub fn init_colors(m: usize) -> RefinementState {
    RefinementState {
        c: Matrix::from_fn(m, |i, j| u32::from(i != j)),
        d: None,
        step: 0,
    }
}

/// Numbers the cells of `keys` by first occurrence in row-major order.
fn canonical_ids<K: Eq + Hash>(m: usize, keys: Vec<K>) -> ColorMatrix {
    let mut ids: HashMap<K, u32> = HashMap::with_capacity(keys.len());
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let next = ids.len() as u32;
        out.push(*ids.entry(key).or_insert(next));
    }
    Matrix::from_fn(m, |i, j| out[i * m + j])
}

/// Colours `D[i][j]` from the sorted vectors `[(C[i][l], C[j][l]) for l]`.
pub fn distance_labels(c: &ColorMatrix) -> ColorMatrix {
    let m = c.dim();
    let mut keys = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let mut pairs: Vec<(u32, u32)> = c
                .row(i)
                .iter()
                .copied()
                .zip(c.row(j).iter().copied())
                .collect();
            pairs.sort_unstable();
            keys.push(pairs);
        }
    }
    canonical_ids(m, keys)
}

/// One recolouring of `state.c`, computing the distance colours first if needed.
pub fn refine_step(state: &RefinementState, g: &Graph) -> RefinementState {
    let c = &state.c;
    let m = c.dim();
    let d = match &state.d {
        Some(d) => d.clone(),
        None => distance_labels(c),
    };
    let mut keys = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let mut tuples: Vec<(u32, u32, u32, u8)> = (0..m)
                .map(|k| (c[(i, j)], c[(k, j)], d[(i, k)], g.h(i, k)))
                .collect();
            tuples.sort_unstable();
            keys.push(tuples);
        }
    }
    let next = canonical_ids(m, keys);
    let next_d = distance_labels(&next);
    RefinementState {
        c: next,
        d: Some(next_d),
        step: state.step + 1,
    }
}

#[derive(Clone, Debug)]
pub struct RefinementRun {
    pub state: RefinementState,
    /// Number of `refine_step` calls, counting the final one that changed nothing.
    pub steps: usize,
    /// `(C, D)` for every step when tracing was requested.
    pub trace: Vec<(ColorMatrix, ColorMatrix)>,
}

/// Refines until `C` stops changing. More than `m^2` steps is an internal error.
pub fn run_refinement(g: &Graph) -> Result<RefinementRun> {
    refine_to_fixpoint(g, false)
}

pub fn run_refinement_traced(g: &Graph) -> Result<RefinementRun> {
    refine_to_fixpoint(g, true)
}

fn refine_to_fixpoint(g: &Graph, trace: bool) -> Result<RefinementRun> {
    let m = g.order();
    let bound = (m * m).max(1);
    let mut state = init_colors(m);
    state.d = Some(distance_labels(&state.c));
    let mut log = Vec::new();
    loop {
        if trace {
            log.push((state.c.clone(), state.d.clone().unwrap()));
        }
        let next = refine_step(&state, g);
        let done = next.c == state.c;
        state = next;
        if state.step > bound {
            return Err(Error::Consistency(format!(
                "refinement took more than {bound} steps on {m} vertices"
            )));
        }
        if done {
            break;
        }
    }
    Ok(RefinementRun {
        steps: state.step,
        state,
        trace: log,
    })
}

/// Vertices whose rows of the stable colouring are permutation equivalent.
pub fn partition_from_colors(c: &ColorMatrix) -> Partition {
    let keys: Vec<Vec<u32>> = (0..c.dim())
        .map(|i| {
            let mut row = c.row(i).to_vec();
            row.sort_unstable();
            row
        })
        .collect();
    Partition::from_keys(&keys)
}

pub fn a1prime_partition(g: &Graph) -> Result<Partition> {
    Ok(partition_from_colors(&run_refinement(g)?.state.c))
}

/// Renders the trace as integer grids, one block per step.
pub fn render_trace(run: &RefinementRun) -> String {
    let mut out = String::new();
    for (s, (c, d)) in run.trace.iter().enumerate() {
        out.push_str(&format!("step {s}\n"));
        for (name, mat) in [("C", c), ("D", d)] {
            out.push_str(name);
            out.push('\n');
            for i in 0..mat.dim() {
                let row: Vec<String> = mat.row(i).iter().map(u32::to_string).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[&[u32]]) -> ColorMatrix {
        Matrix::from_fn(rows.len(), |i, j| rows[i][j])
    }

    #[test]
    fn initial_colours() {
        assert_eq!(init_colors(1).c, grid(&[&[0]]));
        assert_eq!(init_colors(2).c, grid(&[&[0, 1], &[1, 0]]));
        let c3 = init_colors(3).c;
        assert!((0..3).all(|i| (0..3).all(|j| c3[(i, j)] == u32::from(i != j))));
    }

    // P_00 = [(0,0),(1,1)], P_01 = [(0,1),(1,0)] = P_10, P_11 = P_00
    #[test]
    fn distance_colours_of_two_points() {
        assert_eq!(
            distance_labels(&init_colors(2).c),
            grid(&[&[0, 1], &[1, 0]])
        );
    }

    #[test]
    fn distance_colours_of_triangle() {
        let d = distance_labels(&init_colors(3).c);
        assert_eq!(d, grid(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]));
    }

    #[test]
    fn complete_and_empty_graphs_are_immediately_stable() {
        for g in [Graph::complete(3), Graph::empty(4)] {
            let run = run_refinement(&g).unwrap();
            assert_eq!(run.steps, 1);
            assert_eq!(run.state.c, init_colors(g.order()).c);
        }
    }

    #[test]
    fn path_center_separates() {
        let g = Graph::path(3);
        let mut state = init_colors(3);
        for _ in 0..2 {
            state = refine_step(&state, &g);
        }
        let center: Vec<u32> = state.c.row(1).to_vec();
        for end in [0, 2] {
            assert!(state.c.row(end).iter().all(|x| !center.contains(x)));
        }
        assert_eq!(
            a1prime_partition(&g).unwrap().classes(),
            &[vec![0, 2], vec![1]]
        );
    }

    #[test]
    fn trace_has_one_block_per_step() {
        let run = run_refinement_traced(&Graph::path(4)).unwrap();
        assert_eq!(run.trace.len(), run.steps);
        let text = render_trace(&run);
        assert!(text.starts_with("step 0\nC\n0 1 1 1\n"));
        assert_eq!(text.matches("step ").count(), run.steps);
    }

    #[test]
    fn single_vertex() {
        let run = run_refinement(&Graph::empty(1)).unwrap();
        assert_eq!(run.steps, 1);
        assert_eq!(
            a1prime_partition(&Graph::empty(1)).unwrap(),
            Partition::unit(1)
        );
    }
}
