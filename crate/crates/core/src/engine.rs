//! Level-by-level PageRank over the component schedule.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, LoopPolicy};
use crate::partition::{find_components, PartitionCensus};
use crate::scalar::Scalar;
use crate::schedule::{build_schedule, CrossEdge, EdgeCensus, Schedule, ScheduleError, SolveUnit, UnitKind};
use crate::solvers::{solve_unit, SolveError, SolverParams, UnitSolution};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("weight of vertex {vertex} is negative or not finite")]
    InvalidWeight { vertex: usize },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("{kind} unit at level {level}: {source}")]
    Solve {
        kind: UnitKind,
        level: u32,
        #[source]
        source: SolveError,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// How units of one level are dispatched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Sequential,
    /// `threads == 0` uses the available hardware parallelism.
    Parallel { threads: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRecord {
    pub kind: UnitKind,
    pub level: u32,
    pub size: usize,
    pub edges: usize,
    pub iterations: usize,
    pub edge_visits: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportTotals {
    /// Σ iterations · intra edges over large SCC units.
    pub iter_edge_work: usize,
    /// Edge visits of the exact solvers (CAC sweeps, dense builds, kept loops).
    pub exact_edge_work: usize,
    pub cross_edges: usize,
    pub level_count: usize,
    pub total_iterations: usize,
    pub max_iterations: usize,
    pub large_scc_units: usize,
    pub large_scc_vertices: usize,
    pub large_scc_edges: usize,
    /// `iter_edge_work / large_scc_edges`, 0 without large units.
    pub iterations_per_edge: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub c: f64,
    pub tol: f64,
    pub mode: Mode,
    pub small_threshold: usize,
    pub loop_policy: LoopPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub params: ReportParams,
    pub census: PartitionCensus,
    pub edge_census: EdgeCensus,
    pub totals: ReportTotals,
    pub eps_tot: f64,
    pub eps_avg: f64,
    pub units: Vec<UnitRecord>,
    pub warnings: Vec<String>,
}

/// `(|SCC_large| · tol · c/(1-c), eps_tot / n)`.
pub fn error_bound<T: Scalar>(large_vertices: usize, n: usize, c: T, tol: T) -> (T, T) {
    let eps_tot = T::from_count(large_vertices) * tol * c / (T::one() - c);
    let eps_avg = if n == 0 { T::zero() } else { eps_tot / T::from_count(n) };
    (eps_tot, eps_avg)
}

/// Pushes `c · rank_u / outdeg(u)` along each cross edge into `weights`.
pub fn propagate_weights<T: Scalar>(cross: &[CrossEdge], ranks: &[T], weights: &mut [T], c: T) {
    for e in cross {
        weights[e.dst] += c * ranks[e.src] / T::from_count(e.src_out_degree);
    }
}

/// Partitions `g`, schedules it and solves level by level.
pub fn compute_pagerank<T: Scalar>(
    g: &Graph,
    w: &[T],
    params: &SolverParams<T>,
    mode: Mode,
    small_threshold: usize,
) -> Result<(Vec<T>, SolveReport), EngineError> {
    let start = Instant::now();
    let n = g.vertex_count();
    if w.len() != n {
        return Err(EngineError::WeightLength { expected: n, got: w.len() });
    }
    if let Some(vertex) = w.iter().position(|&x| !(x >= T::zero()) || !x.is_finite()) {
        return Err(EngineError::InvalidWeight { vertex });
    }
    let partition = find_components(g);
    let census = PartitionCensus::new(g, &partition);
    let schedule = build_schedule(g, &partition, small_threshold)?;
    let (ranks, units) = solve_schedule(&schedule, w, params, mode)?;

    let mut warnings = Vec::new();
    if n > 0 && w.iter().all(|&x| x == T::zero()) {
        warnings.push("all weights are zero; ranks are all zero".to_string());
    }
    let mut totals = ReportTotals {
        level_count: schedule.levels().len(),
        cross_edges: schedule.levels().iter().map(|l| l.cross_edges.len()).sum(),
        ..ReportTotals::default()
    };
    for u in &units {
        if u.kind == UnitKind::SccLarge {
            totals.iter_edge_work += u.edge_visits;
            totals.total_iterations += u.iterations;
            totals.max_iterations = totals.max_iterations.max(u.iterations);
            totals.large_scc_units += 1;
            totals.large_scc_vertices += u.size;
            totals.large_scc_edges += u.edges;
        } else {
            totals.exact_edge_work += u.edge_visits;
        }
    }
    if totals.large_scc_edges > 0 {
        totals.iterations_per_edge = totals.iter_edge_work as f64 / totals.large_scc_edges as f64;
    }
    let (eps_tot, eps_avg) = error_bound(totals.large_scc_vertices, n, params.c, params.tol);
    totals.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = SolveReport {
        params: ReportParams {
            c: params.c.as_f64(),
            tol: params.tol.as_f64(),
            mode,
            small_threshold,
            loop_policy: g.loop_policy(),
        },
        census,
        edge_census: schedule.edge_census(),
        totals,
        eps_tot: eps_tot.as_f64(),
        eps_avg: eps_avg.as_f64(),
        units,
        warnings,
    };
    Ok((ranks, report))
}

/// Solves every level of `schedule` from the top down. Returns global ranks
/// and one record per unit in schedule order.
pub fn solve_schedule<T: Scalar>(
    schedule: &Schedule,
    w: &[T],
    params: &SolverParams<T>,
    mode: Mode,
) -> Result<(Vec<T>, Vec<UnitRecord>), EngineError> {
    let mut weights = w.to_vec();
    let mut ranks = vec![T::zero(); w.len()];
    let mut records = Vec::new();
    let pool = match mode {
        Mode::Sequential => None,
        Mode::Parallel { threads } => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| EngineError::ThreadPool(e.to_string()))?,
        ),
    };
    for plan in schedule.levels() {
        let frozen = &weights;
        let run = |unit: &SolveUnit| solve_timed(unit, frozen, params);
        let solved: Vec<_> = match &pool {
            None => plan.units.iter().map(run).collect::<Result<_, _>>()?,
            Some(pool) => pool.install(|| plan.units.par_iter().map(run).collect::<Result<_, _>>())?,
        };
        for (unit, (sol, record)) in plan.units.iter().zip(solved) {
            for (&v, r) in unit.global_ids().iter().zip(sol.ranks) {
                ranks[v] = r;
            }
            records.push(record);
        }
        propagate_weights(&plan.cross_edges, &ranks, &mut weights, params.c);
    }
    Ok((ranks, records))
}

fn solve_timed<T: Scalar>(
    unit: &SolveUnit,
    weights: &[T],
    params: &SolverParams<T>,
) -> Result<(UnitSolution<T>, UnitRecord), EngineError> {
    let start = Instant::now();
    let local: Vec<T> = unit.global_ids().iter().map(|&v| weights[v]).collect();
    let sol = solve_unit(unit, &local, params).map_err(|source| EngineError::Solve {
        kind: unit.kind(),
        level: unit.level(),
        source,
    })?;
    let record = UnitRecord {
        kind: unit.kind(),
        level: unit.level(),
        size: unit.size(),
        edges: unit.edge_count(),
        iterations: sol.iterations,
        edge_visits: sol.edge_visits,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok((sol, record))
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Sequential => write!(f, "sequential"),
            Mode::Parallel { threads: 0 } => write!(f, "parallel"),
            Mode::Parallel { threads } => write!(f, "parallel ({threads} threads)"),
        }
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let c = &self.census;
        let t = &self.totals;
        let e = &self.edge_census;
        writeln!(f, "c: {}", p.c)?;
        writeln!(f, "tol: {:e}", p.tol)?;
        writeln!(f, "mode: {}", p.mode)?;
        writeln!(f, "small_threshold: {}", p.small_threshold)?;
        writeln!(f, "loop_policy: {:?}", p.loop_policy)?;
        writeln!(f, "vertices: {}", c.vertices)?;
        writeln!(f, "edges: {}", c.edges)?;
        writeln!(f, "scc_count: {}", c.scc_count)?;
        writeln!(f, "cac_count: {}", c.cac_count)?;
        writeln!(f, "singleton_cac_count: {}", c.singleton_cac_count)?;
        writeln!(f, "largest_component_size: {}", c.largest_component_size)?;
        writeln!(f, "level_count: {}", c.level_count)?;
        writeln!(f, "plain_scc_level_count: {}", c.plain_scc_level_count)?;
        writeln!(f, "cac_edges: {}", e.cac_edges)?;
        writeln!(f, "scc_small_edges: {}", e.scc_small_edges)?;
        writeln!(f, "scc_large_edges: {}", e.scc_large_edges)?;
        writeln!(f, "cross_edges: {}", e.cross_edges)?;
        writeln!(f, "kept_loops: {}", e.singleton_loops)?;
        writeln!(f, "dropped_loops: {}", e.dropped_loops)?;
        writeln!(f, "large_scc_units: {}", t.large_scc_units)?;
        writeln!(f, "large_scc_vertices: {}", t.large_scc_vertices)?;
        writeln!(f, "total_iterations: {}", t.total_iterations)?;
        writeln!(f, "max_iterations: {}", t.max_iterations)?;
        writeln!(f, "iter_edge_work: {}", t.iter_edge_work)?;
        writeln!(f, "exact_edge_work: {}", t.exact_edge_work)?;
        writeln!(f, "iterations_per_edge: {:.3}", t.iterations_per_edge)?;
        writeln!(f, "eps_tot: {:e}", self.eps_tot)?;
        writeln!(f, "eps_avg: {:e}", self.eps_avg)?;
        writeln!(f, "wall_ms: {:.3}", t.wall_ms)?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for u in &self.units {
            writeln!(
                f,
                "unit: {} level={} size={} edges={} iterations={} wall_ms={:.3}",
                u.kind, u.level, u.size, u.edges, u.iterations, u.wall_ms
            )?;
        }
        Ok(())
    }
}
