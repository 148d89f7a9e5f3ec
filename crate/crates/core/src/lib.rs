//! Partitioned PageRank: split a directed graph into strongly connected and
//! connected acyclic components, order them by level and solve each with the
//! cheapest method that fits.

pub mod engine;
pub mod generate;
pub mod graph;
pub mod partition;
pub mod scalar;
pub mod schedule;
pub mod solvers;

pub use engine::{compute_pagerank, EngineError, Mode, SolveReport};
pub use generate::{generate_ba, replicate, GeneratorConfig, KeepRule};
pub use graph::{parse_edge_list, write_edge_list, Graph, GraphError, LoopPolicy, WeightVector};
pub use partition::{find_components, reference_partition, validate_partition, Partition, PartitionCensus};
pub use scalar::Scalar;
pub use schedule::{build_schedule, Schedule, SolveUnit, UnitKind, DEFAULT_SMALL_THRESHOLD};
pub use solvers::{solve_baseline, SolveError, SolverParams};

/// Non-normalized rank vector indexed by vertex id.
pub type RankVector<T> = Vec<T>;
pub type RankVector64 = RankVector<f64>;
pub type RankVector32 = RankVector<f32>;
pub type SolverParams64 = SolverParams<f64>;
pub type WeightVector64 = WeightVector<f64>;
