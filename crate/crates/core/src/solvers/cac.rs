use std::collections::VecDeque;

use super::{check_weights, SolveError, SolverParams, UnitSolution};
use crate::scalar::Scalar;
use crate::schedule::SolveUnit;

/// Exact rank of an acyclic unit in one topological sweep.
///
/// A vertex is dequeued only after all of its in-edges were applied, so each
/// intra edge is visited exactly once.
pub fn solve_cac<T: Scalar>(unit: &SolveUnit, w: &[T], params: &SolverParams<T>) -> Result<UnitSolution<T>, SolveError> {
    check_weights(unit, w)?;
    let n = unit.size();
    let mut in_degree = vec![0usize; n];
    for (u, v) in unit.edges() {
        if u != v {
            in_degree[v] += 1;
        }
    }
    let mut rank = w.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| in_degree[v] == 0).collect();
    let mut processed = 0;
    let mut edge_visits = 0;
    while let Some(u) = queue.pop_front() {
        processed += 1;
        let deg = unit.out_degree(u);
        if deg == 0 {
            continue;
        }
        let a = T::one() / T::from_count(deg);
        if unit.has_loop(u) {
            rank[u] /= T::one() - params.c * a;
        }
        let share = rank[u] * params.c * a;
        for &v in unit.out_neighbors(u) {
            edge_visits += 1;
            if v == u {
                continue;
            }
            rank[v] += share;
            in_degree[v] -= 1;
            if in_degree[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if processed < n {
        return Err(SolveError::CycleInCac {
            size: n,
            remaining: n - processed,
        });
    }
    Ok(UnitSolution {
        ranks: rank,
        iterations: 0,
        edge_visits,
    })
}
