//! Immutable directed graph in compressed out-adjacency form.
//!
//! Edge weights are never stored. The weight of edge `(u, v)` is
//! `1 / outdeg(u)`, where self-loops count towards `outdeg(u)` only when the
//! graph's [`LoopPolicy`] keeps them.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Dense ids beyond this bound are rejected instead of allocating.
const MAX_DENSE_ID: u64 = u32::MAX as u64;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge list contains no vertices")]
    Empty,
    #[error("edge ({src}, {dst}) references a vertex outside 0..{n}")]
    VertexOutOfRange { src: usize, dst: usize, n: usize },
    #[error("weight vector has {got} entries, graph has {expected} vertices")]
    WeightLength { expected: usize, got: usize },
    #[error("weight of vertex {vertex} is negative or not finite")]
    InvalidWeight { vertex: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// How self-loops take part in the rank computation.
///
/// Loops never influence component finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopPolicy {
    #[default]
    Ignore,
    Keep,
}

#[derive(Debug, Clone)]
pub struct Graph {
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    has_loop: Vec<bool>,
    loop_policy: LoopPolicy,
    labels: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(src, dst)) = edges.iter().find(|&&(s, d)| s >= n || d >= n) {
            return Err(GraphError::VertexOutOfRange { src, dst, n });
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_unique(n, &edges))
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, &[])
    }

    fn from_sorted_unique(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut out_offsets = vec![0usize; n + 1];
        for &(s, _) in edges {
            out_offsets[s + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<usize> = edges.iter().map(|&(_, d)| d).collect();
        let mut has_loop = vec![false; n];
        for &(s, d) in edges {
            if s == d {
                has_loop[s] = true;
            }
        }
        Graph {
            out_offsets,
            out_targets,
            has_loop,
            loop_policy: LoopPolicy::default(),
            labels: None,
        }
    }

    pub fn with_loop_policy(mut self, policy: LoopPolicy) -> Self {
        self.loop_policy = policy;
        self
    }

    pub fn loop_policy(&self) -> LoopPolicy {
        self.loop_policy
    }

    pub fn vertex_count(&self) -> usize {
        self.has_loop.len()
    }

    /// Number of stored edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn loop_count(&self) -> usize {
        self.has_loop.iter().filter(|&&l| l).count()
    }

    pub fn out_offsets(&self) -> &[usize] {
        &self.out_offsets
    }

    pub fn out_targets(&self) -> &[usize] {
        &self.out_targets
    }

    /// Out-neighbors of `v` in increasing id order, self-loop included.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// Stored out-degree, self-loop included.
    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.has_loop[v]
    }

    /// Out-degree used for edge weights under the current loop policy.
    pub fn rank_out_degree(&self, v: usize) -> usize {
        let d = self.out_degree(v);
        if self.has_loop[v] && self.loop_policy == LoopPolicy::Ignore {
            d - 1
        } else {
            d
        }
    }

    pub fn rank_out_degrees(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .map(|v| self.rank_out_degree(v))
            .collect()
    }

    /// Whether the edge takes part in the rank computation.
    pub fn is_rank_edge(&self, u: usize, v: usize) -> bool {
        u != v || self.loop_policy == LoopPolicy::Keep
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Row-normalized weight of edge `(u, v)`, or `None` when the edge does not
    /// exist or is a self-loop ignored by the loop policy.
    pub fn edge_weight<T: Scalar>(&self, u: usize, v: usize) -> Option<T> {
        if !self.has_edge(u, v) || !self.is_rank_edge(u, v) {
            return None;
        }
        Some(T::one() / T::from_count(self.rank_out_degree(u)))
    }

    /// In-adjacency mirror, built on demand.
    pub fn in_adjacency(&self) -> InAdjacency {
        let n = self.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for &d in &self.out_targets {
            offsets[d + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut sources = vec![0usize; self.edge_count()];
        for (u, v) in self.edges() {
            sources[cursor[v]] = u;
            cursor[v] += 1;
        }
        InAdjacency { offsets, sources }
    }

    /// Original ids when the graph was read with id compaction.
    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    /// External id of vertex `v`.
    pub fn label(&self, v: usize) -> u64 {
        match &self.labels {
            Some(l) => l[v],
            None => v as u64,
        }
    }
}

/// Incoming edges grouped by destination.
#[derive(Debug, Clone)]
pub struct InAdjacency {
    offsets: Vec<usize>,
    sources: Vec<usize>,
}

impl InAdjacency {
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.sources[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Reads a `src<TAB>dst` edge list. Lines starting with `#` are comments.
///
/// With `dense_ids` the vertex count is `max id + 1`; otherwise distinct ids
/// are compacted to `0..k` in increasing order and kept as labels.
pub fn parse_edge_list<R: BufRead>(reader: R, dense_ids: bool) -> Result<Graph, GraphError> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(GraphError::Parse {
                line: line_no,
                message: format!("expected two vertex ids, got {line:?}"),
            });
        };
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("invalid vertex id {s:?}"),
            })
        };
        raw.push((parse(a)?, parse(b)?));
    }
    if raw.is_empty() {
        return Err(GraphError::Empty);
    }

    if dense_ids {
        let max = raw.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
        if max >= MAX_DENSE_ID {
            return Err(GraphError::Parse {
                line: 0,
                message: format!("vertex id {max} too large for dense ids"),
            });
        }
        let edges = raw.into_iter().map(|(a, b)| (a as usize, b as usize));
        return Graph::from_edges(max as usize + 1, edges);
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let edges = raw.into_iter().map(|(a, b)| (index[&a], index[&b]));
    let mut g = Graph::from_edges(ids.len(), edges)?;
    g.labels = Some(ids);
    Ok(g)
}

/// Writes the edge set as `src<TAB>dst` lines with LF endings.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{}\t{}", g.label(u), g.label(v))?;
    }
    out.flush()
}

/// Vertex groups by in/out presence and cycle membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexGroup {
    /// No in- or out-edges.
    G1,
    /// Dangling: in-edges only.
    G2,
    /// Root: out-edges only.
    G3,
    /// In- and out-edges but on no non-loop cycle.
    G4,
    /// On a non-loop cycle.
    G5,
}

/// Labels every vertex. `scc_membership[v]` marks membership in an SCC of
/// size at least two. Self-loops are ignored.
pub fn classify_vertices(g: &Graph, scc_membership: &[bool]) -> Vec<VertexGroup> {
    let n = g.vertex_count();
    assert_eq!(scc_membership.len(), n, "membership length must match graph");
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for (u, v) in g.edges().filter(|&(u, v)| u != v) {
        has_out[u] = true;
        has_in[v] = true;
    }
    (0..n)
        .map(|v| match (scc_membership[v], has_in[v], has_out[v]) {
            (true, _, _) => VertexGroup::G5,
            (false, false, false) => VertexGroup::G1,
            (false, true, false) => VertexGroup::G2,
            (false, false, true) => VertexGroup::G3,
            (false, true, true) => VertexGroup::G4,
        })
        .collect()
}

/// Non-negative per-vertex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self, GraphError> {
        if let Some(vertex) = values.iter().position(|w| !w.is_finite() || *w < T::zero()) {
            return Err(GraphError::InvalidWeight { vertex });
        }
        Ok(WeightVector { values })
    }

    pub fn uniform(n: usize, value: T) -> Self {
        WeightVector {
            values: vec![value; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self::uniform(n, T::one())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l1_norm(&self) -> T {
        self.values.iter().copied().sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|w| w.is_zero())
    }

    /// Probability vector `W / ‖W‖₁`; `None` when all weights are zero.
    pub fn normalized(&self) -> Option<Vec<T>> {
        let s = self.l1_norm();
        if s.is_zero() {
            return None;
        }
        Some(self.values.iter().map(|&w| w / s).collect())
    }

    pub fn check_len(&self, n: usize) -> Result<(), GraphError> {
        if self.values.len() != n {
            return Err(GraphError::WeightLength {
                expected: n,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}
