use super::{check_weights, SolveError, SolverParams, UnitSolution};
use crate::graph::{Graph, LoopPolicy};
use crate::scalar::{max_norm, Scalar};
use crate::schedule::SolveUnit;

/// State handed to an observer after each power-series iteration.
#[derive(Debug, Clone, Copy)]
pub struct PowerStep<'a, T> {
    /// 1-based iteration number.
    pub iteration: usize,
    /// `(cAᵀ)^iteration W`.
    pub increment: &'a [T],
    /// Partial sum including `increment`.
    pub rank: &'a [T],
}

/// `y = c Aᵀ x` over a CSR adjacency with per-row normalizing degrees.
struct Operator<'a> {
    offsets: &'a [usize],
    targets: &'a [usize],
    degrees: &'a [usize],
    skip_loops: bool,
}

impl Operator<'_> {
    fn apply<T: Scalar>(&self, c: T, x: &[T], y: &mut [T]) {
        y.fill(T::zero());
        for u in 0..x.len() {
            let row = &self.targets[self.offsets[u]..self.offsets[u + 1]];
            if row.is_empty() {
                continue;
            }
            let share = c * x[u] / T::from_count(self.degrees[u]);
            for &v in row {
                if self.skip_loops && v == u {
                    continue;
                }
                y[v] += share;
            }
        }
    }

    fn edge_count(&self) -> usize {
        self.targets.len()
    }
}

fn power_series<T: Scalar, F>(
    op: &Operator<'_>,
    w: &[T],
    params: &SolverParams<T>,
    mut observe: F,
) -> Result<UnitSolution<T>, SolveError>
where
    F: FnMut(PowerStep<'_, T>),
{
    let cap = params.iteration_cap();
    let mut rank = w.to_vec();
    let mut increment = w.to_vec();
    let mut next = vec![T::zero(); w.len()];
    for iteration in 1..=cap {
        op.apply(params.c, &increment, &mut next);
        std::mem::swap(&mut increment, &mut next);
        for (r, &d) in rank.iter_mut().zip(&increment) {
            *r += d;
        }
        observe(PowerStep {
            iteration,
            increment: &increment,
            rank: &rank,
        });
        if max_norm(&increment) < params.tol {
            return Ok(UnitSolution {
                ranks: rank,
                iterations: iteration,
                edge_visits: iteration * op.edge_count(),
            });
        }
    }
    Err(SolveError::IterationCap { cap })
}

/// Power series `Σ (cAᵀ)^k W` restricted to one unit.
pub fn solve_large_scc<T: Scalar>(
    unit: &SolveUnit,
    w: &[T],
    params: &SolverParams<T>,
) -> Result<UnitSolution<T>, SolveError> {
    solve_large_scc_observed(unit, w, params, |_| {})
}

pub fn solve_large_scc_observed<T: Scalar, F>(
    unit: &SolveUnit,
    w: &[T],
    params: &SolverParams<T>,
    observe: F,
) -> Result<UnitSolution<T>, SolveError>
where
    F: FnMut(PowerStep<'_, T>),
{
    check_weights(unit, w)?;
    let (offsets, targets, degrees) = unit.csr();
    let op = Operator {
        offsets,
        targets,
        degrees,
        skip_loops: false,
    };
    power_series(&op, w, params, observe)
}

/// Unpartitioned power series over the whole graph.
pub fn solve_baseline<T: Scalar>(g: &Graph, w: &[T], params: &SolverParams<T>) -> Result<UnitSolution<T>, SolveError> {
    solve_baseline_observed(g, w, params, |_| {})
}

pub fn solve_baseline_observed<T: Scalar, F>(
    g: &Graph,
    w: &[T],
    params: &SolverParams<T>,
    observe: F,
) -> Result<UnitSolution<T>, SolveError>
where
    F: FnMut(PowerStep<'_, T>),
{
    if w.len() != g.vertex_count() {
        return Err(SolveError::WeightLength {
            expected: g.vertex_count(),
            got: w.len(),
        });
    }
    let degrees = g.rank_out_degrees();
    let skip_loops = g.loop_policy() == LoopPolicy::Ignore;
    let op = Operator {
        offsets: g.out_offsets(),
        targets: g.out_targets(),
        degrees: &degrees,
        skip_loops,
    };
    let mut sol = power_series(&op, w, params, observe)?;
    if skip_loops {
        sol.edge_visits = sol.iterations * (g.edge_count() - g.loop_count());
    }
    Ok(sol)
}
