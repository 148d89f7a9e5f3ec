use super::{check_weights, SolveError, SolverParams, UnitSolution};
use crate::scalar::Scalar;
use crate::schedule::SolveUnit;

/// Solves `M x = b` in place by Gaussian elimination with partial pivoting.
/// `m` is row-major `n × n`; on success `b` holds the solution.
pub fn lu_solve<T: Scalar>(m: &mut [T], b: &mut [T]) -> Result<(), SolveError> {
    let n = b.len();
    assert_eq!(m.len(), n * n);
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| m[i * n + k].abs().partial_cmp(&m[j * n + k].abs()).unwrap())
            .unwrap();
        let pivot = m[pivot_row * n + k];
        if !(pivot.abs() > T::epsilon()) {
            return Err(SolveError::Singular { column: k });
        }
        if pivot_row != k {
            for j in 0..n {
                m.swap(k * n + j, pivot_row * n + j);
            }
            b.swap(k, pivot_row);
        }
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            if f == T::zero() {
                continue;
            }
            m[i * n + k] = f;
            for j in k + 1..n {
                let t = m[k * n + j];
                m[i * n + j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= m[k * n + j] * b[j];
        }
        b[k] = s / m[k * n + k];
    }
    Ok(())
}

/// Direct solve of `(I - c Aᵀ) R = W` for a unit small enough to densify.
pub fn solve_small_scc<T: Scalar>(
    unit: &SolveUnit,
    w: &[T],
    params: &SolverParams<T>,
) -> Result<UnitSolution<T>, SolveError> {
    check_weights(unit, w)?;
    let n = unit.size();
    let mut m = vec![T::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = T::one();
    }
    for (u, v) in unit.edges() {
        m[v * n + u] -= params.c / T::from_count(unit.out_degree(u));
    }
    let mut ranks = w.to_vec();
    lu_solve(&mut m, &mut ranks)?;
    Ok(UnitSolution {
        ranks,
        iterations: 0,
        edge_visits: unit.edge_count(),
    })
}
