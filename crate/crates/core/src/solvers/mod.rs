//! Per-unit PageRank solvers and the whole-graph baseline.
//!
//! All solvers compute the non-normalized rank `R = (I - c Aᵀ)⁻¹ W`, where
//! `A` is the row-normalized adjacency matrix. Rank flows along edges;
//! dangling rows simply contribute nothing.

mod cac;
mod dense;
mod oracle;
mod power;
mod singleton;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::schedule::{SolveUnit, UnitKind};

pub use cac::solve_cac;
pub use dense::{lu_solve, solve_small_scc};
pub use oracle::{oracle_r1_to_r3, OracleR1Result};
pub use power::{solve_baseline, solve_baseline_observed, solve_large_scc, solve_large_scc_observed, PowerStep};
pub use singleton::solve_singletons;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("damping factor must lie in (0, 1), got {0}")]
    InvalidDamping(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("cycle in CAC: {remaining} of {size} vertices never reached in-degree zero")]
    CycleInCac { size: usize, remaining: usize },
    #[error("singleton group contains non-loop edge ({src}, {dst})")]
    EdgeInSingletonGroup { src: usize, dst: usize },
    #[error("dense factorization degenerated at column {column}")]
    Singular { column: usize },
    #[error("power series did not converge within {cap} iterations")]
    IterationCap { cap: usize },
    #[error("eigenvector oracle did not converge within {cap} iterations")]
    OracleNoConvergence { cap: usize },
    #[error("weight vector is all zero")]
    ZeroWeights,
}

/// Damping factor and convergence tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams<T> {
    pub c: T,
    pub tol: T,
}

impl<T: Scalar> SolverParams<T> {
    pub fn new(c: T, tol: T) -> Result<Self, SolveError> {
        if !(c > T::zero() && c < T::one()) {
            return Err(SolveError::InvalidDamping(c.as_f64()));
        }
        if !(tol > T::zero()) || !tol.is_finite() {
            return Err(SolveError::InvalidTolerance(tol.as_f64()));
        }
        Ok(SolverParams { c, tol })
    }

    /// Iterations needed for `c^k < tol`, i.e. `⌈log tol / log c⌉`.
    pub fn iteration_lower_bound(&self) -> usize {
        let k = (self.tol.ln() / self.c.ln()).ceil();
        k.to_usize().unwrap_or(0)
    }

    /// Ten times the lower bound, at least ten.
    pub fn iteration_cap(&self) -> usize {
        (10 * self.iteration_lower_bound()).max(10)
    }

    /// `c / (1 - c)`: bound on the remaining mass after one increment.
    pub fn tail_factor(&self) -> T {
        self.c / (T::one() - self.c)
    }
}

/// Ranks of one unit (in local ids) plus work counters.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSolution<T> {
    pub ranks: Vec<T>,
    /// Power-series iterations; 0 for exact methods.
    pub iterations: usize,
    /// Intra-unit edge visits over the whole solve.
    pub edge_visits: usize,
}

/// Solves `unit` with the method its kind calls for.
pub fn solve_unit<T: Scalar>(unit: &SolveUnit, w: &[T], params: &SolverParams<T>) -> Result<UnitSolution<T>, SolveError> {
    match unit.kind() {
        UnitKind::SingletonGroup => solve_singletons(unit, w, params),
        UnitKind::Cac => solve_cac(unit, w, params),
        UnitKind::SccSmall => solve_small_scc(unit, w, params),
        UnitKind::SccLarge => solve_large_scc(unit, w, params),
    }
}

pub(crate) fn check_weights<T>(unit: &SolveUnit, w: &[T]) -> Result<(), SolveError> {
    if w.len() != unit.size() {
        return Err(SolveError::WeightLength {
            expected: unit.size(),
            got: w.len(),
        });
    }
    Ok(())
}
