use super::{SolveError, SolverParams};
use crate::graph::Graph;
use crate::scalar::{l1_norm, Scalar};

const ORACLE_CAP: usize = 1_000_000;

/// Output of [`oracle_r1_to_r3`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleR1Result<T> {
    /// Stationary distribution of the patched Google matrix (sums to 1).
    pub r1: Vec<T>,
    /// `1 - ‖c Aᵀ r1‖₁`.
    pub d: T,
    /// `r1 ‖W‖₁ / d`, equal to `(I - c Aᵀ)⁻¹ W`.
    pub r3: Vec<T>,
    pub iterations: usize,
}

/// Non-normalized rank through the eigenvector route.
///
/// Dangling rows are patched with the normalized weights, the stationary
/// vector of `c(A + g wᵀ)ᵀ + (1 - c) w eᵀ` is found by dense power iteration
/// and then rescaled. Cost is quadratic per iteration, meant for small graphs.
pub fn oracle_r1_to_r3<T: Scalar>(g: &Graph, w: &[T], params: &SolverParams<T>) -> Result<OracleR1Result<T>, SolveError> {
    let n = g.vertex_count();
    if w.len() != n {
        return Err(SolveError::WeightLength { expected: n, got: w.len() });
    }
    let w_norm = l1_norm(w);
    if w_norm == T::zero() {
        return Err(SolveError::ZeroWeights);
    }
    let wn: Vec<T> = w.iter().map(|&x| x / w_norm).collect();
    let c = params.c;

    // a[u][v] = 1/deg(u) for rank edges
    let deg = g.rank_out_degrees();
    let mut a = vec![T::zero(); n * n];
    for (u, v) in g.edges() {
        if g.is_rank_edge(u, v) {
            a[u * n + v] = T::one() / T::from_count(deg[u]);
        }
    }
    let mut m = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let patched = if deg[j] == 0 { wn[i] } else { a[j * n + i] };
            m[i * n + j] = c * patched + (T::one() - c) * wn[i];
        }
    }

    let stop = T::lit(1e-14).max(T::from_count(8 * n) * T::epsilon());
    let mut r = vec![T::one() / T::from_count(n); n];
    let mut next = vec![T::zero(); n];
    let mut iterations = 0;
    loop {
        if iterations == ORACLE_CAP {
            return Err(SolveError::OracleNoConvergence { cap: ORACLE_CAP });
        }
        iterations += 1;
        for i in 0..n {
            next[i] = (0..n).map(|j| m[i * n + j] * r[j]).sum();
        }
        let s = l1_norm(&next);
        let mut delta = T::zero();
        for i in 0..n {
            let x = next[i] / s;
            delta += (x - r[i]).abs();
            r[i] = x;
        }
        if delta < stop {
            break;
        }
    }

    let mut flow = vec![T::zero(); n];
    for u in 0..n {
        for v in 0..n {
            flow[v] += c * a[u * n + v] * r[u];
        }
    }
    let d = T::one() - l1_norm(&flow);
    let r3 = r.iter().map(|&x| x * w_norm / d).collect();
    Ok(OracleR1Result {
        r1: r,
        d,
        r3,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::solve_baseline;

    #[test]
    fn matches_baseline_with_dangling_vertex() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        let w = [1.0, 2.0, 0.5];
        let p = SolverParams::new(0.85, 1e-13).unwrap();
        let o = oracle_r1_to_r3(&g, &w, &p).unwrap();
        let b = solve_baseline(&g, &w, &p).unwrap();
        assert!((o.r1.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for (x, y) in o.r3.iter().zip(&b.ranks) {
            assert!((x - y).abs() < 1e-10 * y, "{x} vs {y}");
        }
    }

    #[test]
    fn zero_weights_rejected() {
        let g = Graph::empty(2);
        let p = SolverParams::new(0.85, 1e-9).unwrap();
        assert_eq!(oracle_r1_to_r3(&g, &[0.0, 0.0], &p), Err(SolveError::ZeroWeights));
    }
}
