//! Execution plan derived from a partition.
//!
//! Components are ordered by descending level, then descending size. Every
//! 1-vertex component of a level is batched into one singleton group, and
//! every edge lands in exactly one place: the intra-edge list of one unit,
//! the cross-edge bucket of its source level, or (for self-loops under
//! [`LoopPolicy::Ignore`]) the dropped count.

use std::cmp::Reverse;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, LoopPolicy};
use crate::partition::{ComponentKind, Partition};

pub const DEFAULT_SMALL_THRESHOLD: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("small-SCC threshold must be at least 1, got {0}")]
    InvalidThreshold(usize),
    #[error("partition covers {partition} vertices, graph has {graph}")]
    SizeMismatch { graph: usize, partition: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    SingletonGroup,
    Cac,
    SccSmall,
    SccLarge,
}

impl std::fmt::Display for UnitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UnitKind::SingletonGroup => "singleton_group",
            UnitKind::Cac => "cac",
            UnitKind::SccSmall => "scc_small",
            UnitKind::SccLarge => "scc_large",
        })
    }
}

/// A batch of vertices solved together, with its induced edges in local ids.
///
/// Local ids follow increasing global id. `out_degree` holds each vertex's
/// out-degree in the whole graph, so rows leaving the unit stay
/// sub-stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveUnit {
    kind: UnitKind,
    level: u32,
    global_ids: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    out_degree: Vec<usize>,
}

impl SolveUnit {
    /// Builds a unit from local edges. `global_ids` should be increasing.
    ///
    /// # Panics
    /// If an edge endpoint is out of range or a degree is smaller than the
    /// number of local out-edges.
    pub fn new(
        kind: UnitKind,
        level: u32,
        global_ids: Vec<usize>,
        mut local_edges: Vec<(usize, usize)>,
        out_degree: Vec<usize>,
    ) -> Self {
        let n = global_ids.len();
        assert_eq!(out_degree.len(), n);
        local_edges.sort_unstable();
        local_edges.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(s, d) in &local_edges {
            assert!(s < n && d < n, "local edge ({s}, {d}) out of range");
            offsets[s + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
            assert!(
                offsets[i + 1] - offsets[i] <= out_degree[i],
                "out-degree of local vertex {i} below its edge count"
            );
        }
        let targets = local_edges.into_iter().map(|(_, d)| d).collect();
        SolveUnit {
            kind,
            level,
            global_ids,
            offsets,
            targets,
            out_degree,
        }
    }

    /// The whole graph as a single unit, honouring its loop policy.
    pub fn from_graph(g: &Graph, kind: UnitKind) -> Self {
        let edges = g.edges().filter(|&(u, v)| g.is_rank_edge(u, v)).collect();
        SolveUnit::new(
            kind,
            0,
            (0..g.vertex_count()).collect(),
            edges,
            g.rank_out_degrees(),
        )
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn size(&self) -> usize {
        self.global_ids.len()
    }

    pub fn global_ids(&self) -> &[usize] {
        &self.global_ids
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn out_neighbors(&self, local: usize) -> &[usize] {
        &self.targets[self.offsets[local]..self.offsets[local + 1]]
    }

    pub fn out_degree(&self, local: usize) -> usize {
        self.out_degree[local]
    }

    pub fn has_loop(&self, local: usize) -> bool {
        self.out_neighbors(local).binary_search(&local).is_ok()
    }

    pub(crate) fn csr(&self) -> (&[usize], &[usize], &[usize]) {
        (&self.offsets, &self.targets, &self.out_degree)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size()).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }
}

/// Edge from a solved level into some lower level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossEdge {
    pub src: usize,
    pub dst: usize,
    pub src_out_degree: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelPlan {
    pub level: u32,
    /// Units in non-increasing size order.
    pub units: Vec<SolveUnit>,
    /// Edges leaving this level, by source.
    pub cross_edges: Vec<CrossEdge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    levels: Vec<LevelPlan>,
    permutation: Vec<usize>,
    dropped_loops: usize,
    small_threshold: usize,
}

/// Edge counts by destination in a schedule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCensus {
    pub singleton_loops: usize,
    pub cac_edges: usize,
    pub scc_small_edges: usize,
    pub scc_large_edges: usize,
    pub cross_edges: usize,
    pub dropped_loops: usize,
}

impl EdgeCensus {
    pub fn total(&self) -> usize {
        self.singleton_loops
            + self.cac_edges
            + self.scc_small_edges
            + self.scc_large_edges
            + self.cross_edges
            + self.dropped_loops
    }
}

impl Schedule {
    /// Levels in descending order.
    pub fn levels(&self) -> &[LevelPlan] {
        &self.levels
    }

    /// `permutation[v]` is the position of vertex `v` in the reordered matrix.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn dropped_loops(&self) -> usize {
        self.dropped_loops
    }

    pub fn small_threshold(&self) -> usize {
        self.small_threshold
    }

    pub fn units(&self) -> impl Iterator<Item = &SolveUnit> {
        self.levels.iter().flat_map(|l| l.units.iter())
    }

    pub fn edge_census(&self) -> EdgeCensus {
        let mut c = EdgeCensus {
            dropped_loops: self.dropped_loops,
            ..EdgeCensus::default()
        };
        for level in &self.levels {
            c.cross_edges += level.cross_edges.len();
            for u in &level.units {
                let slot = match u.kind {
                    UnitKind::SingletonGroup => &mut c.singleton_loops,
                    UnitKind::Cac => &mut c.cac_edges,
                    UnitKind::SccSmall => &mut c.scc_small_edges,
                    UnitKind::SccLarge => &mut c.scc_large_edges,
                };
                *slot += u.edge_count();
            }
        }
        c
    }
}

/// Stable counting sort of `items` by a key in `0..=max_key`, descending.
fn counting_sort_desc(items: &[usize], max_key: usize, key: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut counts = vec![0usize; max_key + 2];
    for &i in items {
        counts[max_key - key(i) + 1] += 1;
    }
    for k in 0..=max_key {
        counts[k + 1] += counts[k];
    }
    let mut out = vec![0usize; items.len()];
    for &i in items {
        let slot = &mut counts[max_key - key(i)];
        out[*slot] = i;
        *slot += 1;
    }
    out
}

pub fn build_schedule(g: &Graph, p: &Partition, small_threshold: usize) -> Result<Schedule, ScheduleError> {
    if small_threshold < 1 {
        return Err(ScheduleError::InvalidThreshold(small_threshold));
    }
    let n = g.vertex_count();
    if p.vertex_count() != n {
        return Err(ScheduleError::SizeMismatch {
            graph: n,
            partition: p.vertex_count(),
        });
    }
    let comps = p.components();
    let k = comps.len();

    // (level desc, size desc, id asc) via two stable counting passes
    let ids: Vec<usize> = (0..k).collect();
    let by_size = counting_sort_desc(&ids, n, |c| comps[c].size);
    let max_level = p.max_level() as usize;
    let order = counting_sort_desc(&by_size, max_level, |c| comps[c].level as usize);

    let members = p.members();
    let mut permutation = vec![0usize; n];
    let mut pos = 0;
    for &c in &order {
        for &v in &members[c] {
            permutation[v] = pos;
            pos += 1;
        }
    }

    // unit assignment: (level slot, unit index, local id) per vertex
    let level_slot = |level: u32| max_level - level as usize;
    let mut levels: Vec<LevelPlan> = (0..=max_level)
        .rev()
        .map(|l| LevelPlan {
            level: l as u32,
            units: Vec::new(),
            cross_edges: Vec::new(),
        })
        .collect();
    if k == 0 {
        levels.clear();
    }
    let mut unit_members: Vec<Vec<Vec<usize>>> = vec![Vec::new(); levels.len()];
    let mut unit_kinds: Vec<Vec<UnitKind>> = vec![Vec::new(); levels.len()];
    let mut singleton_unit: Vec<Option<usize>> = vec![None; levels.len()];
    for &c in &order {
        let comp = comps[c];
        let slot = level_slot(comp.level);
        if comp.size == 1 {
            let idx = *singleton_unit[slot].get_or_insert_with(|| {
                unit_members[slot].push(Vec::new());
                unit_kinds[slot].push(UnitKind::SingletonGroup);
                unit_members[slot].len() - 1
            });
            unit_members[slot][idx].push(members[c][0]);
        } else {
            let kind = match comp.kind {
                ComponentKind::Cac => UnitKind::Cac,
                ComponentKind::Scc if comp.size < small_threshold => UnitKind::SccSmall,
                ComponentKind::Scc => UnitKind::SccLarge,
            };
            unit_members[slot].push(members[c].clone());
            unit_kinds[slot].push(kind);
        }
    }

    let mut home = vec![(0usize, 0usize, 0usize); n];
    for (slot, units) in unit_members.iter_mut().enumerate() {
        for (ui, ms) in units.iter_mut().enumerate() {
            ms.sort_unstable();
            for (local, &v) in ms.iter().enumerate() {
                home[v] = (slot, ui, local);
            }
        }
    }

    let mut unit_edges: Vec<Vec<Vec<(usize, usize)>>> = unit_members
        .iter()
        .map(|units| vec![Vec::new(); units.len()])
        .collect();
    let mut dropped_loops = 0;
    let comp_of = p.comp_of();
    for (u, v) in g.edges() {
        let (slot, ui, lu) = home[u];
        if u == v {
            if g.loop_policy() == LoopPolicy::Keep {
                unit_edges[slot][ui].push((lu, lu));
            } else {
                dropped_loops += 1;
            }
        } else if comp_of[u] == comp_of[v] {
            unit_edges[slot][ui].push((lu, home[v].2));
        } else {
            levels[slot].cross_edges.push(CrossEdge {
                src: u,
                dst: v,
                src_out_degree: g.rank_out_degree(u),
            });
        }
    }

    for (slot, plan) in levels.iter_mut().enumerate() {
        let members = std::mem::take(&mut unit_members[slot]);
        let edges = std::mem::take(&mut unit_edges[slot]);
        plan.units = members
            .into_iter()
            .zip(edges)
            .zip(&unit_kinds[slot])
            .map(|((ids, edges), &kind)| {
                let degrees = ids.iter().map(|&v| g.rank_out_degree(v)).collect();
                SolveUnit::new(kind, plan.level, ids, edges, degrees)
            })
            .collect();
        plan.units.sort_by_key(|u| Reverse(u.size()));
    }

    Ok(Schedule {
        levels,
        permutation,
        dropped_loops,
        small_threshold,
    })
}

/// `(row, col)` of every edge in the reordered adjacency matrix, sorted.
pub fn export_reordered(g: &Graph, s: &Schedule) -> Vec<(usize, usize)> {
    let perm = s.permutation();
    let mut coords: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    coords.sort_unstable();
    coords
}

pub fn write_coordinates<W: Write>(coords: &[(usize, usize)], mut out: W) -> io::Result<()> {
    for (r, c) in coords {
        writeln!(out, "{r}\t{c}")?;
    }
    out.flush()
}
