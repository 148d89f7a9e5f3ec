//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code)]

use levelrank::graph::{Graph, LoopPolicy};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;
pub const E: usize = 4;
pub const F: usize = 5;
pub const G: usize = 6;
pub const H: usize = 7;

/// Eight-vertex example: two 2-cycles, a three-vertex acyclic part and a root.
pub fn example_graph() -> Graph {
    Graph::from_edges(
        8,
        [
            (A, B),
            (A, C),
            (B, D),
            (D, B),
            (B, F),
            (B, G),
            (C, E),
            (C, F),
            (E, F),
            (G, H),
            (H, G),
        ],
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi digraph without self-loops.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random digraph that may contain self-loops.
pub fn random_digraph_with_loops(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Weakly connected DAG: every vertex after the first gets a parent among
/// earlier vertices, plus extra forward edges with probability `p`.
pub fn random_connected_dag(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
        for u in 0..v {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Strongly connected digraph: a random Hamiltonian ring plus random chords.
pub fn random_strongly_connected(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges.retain(|&(u, v)| u != v);
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    perm
}

pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.vertex_count(), g.edges().map(|(u, v)| (perm[u], perm[v])))
        .unwrap()
        .with_loop_policy(g.loop_policy())
}

/// Dense direct solve of `(I - c Aᵀ) R = W` through nalgebra's LU.
pub fn dense_oracle(g: &Graph, w: &[f64], c: f64) -> Vec<f64> {
    let n = g.vertex_count();
    let mut m = DMatrix::<f64>::identity(n, n);
    for (u, v) in g.edges() {
        if u == v && g.loop_policy() == LoopPolicy::Ignore {
            continue;
        }
        m[(v, u)] -= c / g.rank_out_degree(u) as f64;
    }
    let rhs = DVector::from_column_slice(w);
    m.lu().solve(&rhs).expect("I - cA^T is nonsingular").iter().copied().collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
