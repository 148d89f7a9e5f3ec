//! SCC/CAC partitioning.
//!
//! A strongly connected component (SCC) here always has at least two
//! vertices; every 1-vertex SCC is a connected acyclic component (CAC).
//! Component levels are longest-path lengths in the condensation, so every
//! edge between components goes from a higher to a lower level.

mod finder;
mod reference;
mod union_find;
mod validate;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

pub use finder::{find_components, find_components_with, plain_scc_partition, DfsCounters, FinderOptions};
pub use reference::{kosaraju_scc, reference_partition};
pub use union_find::UnionFind;
pub use validate::{validate_partition, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Scc,
    Cac,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComponentKind::Scc => "SCC",
            ComponentKind::Cac => "CAC",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub level: u32,
    pub size: usize,
}

/// Component id per vertex plus per-component kind, level and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    comp_of: Vec<usize>,
    components: Vec<Component>,
}

/// Order-free description of one component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalComponent {
    pub members: Vec<usize>,
    pub kind: ComponentKind,
    pub level: u32,
}

impl Partition {
    fn from_raw(comp_of: Vec<usize>, components: Vec<Component>) -> Self {
        Partition { comp_of, components }
    }

    /// Builds a partition from an explicit assignment; sizes are derived.
    ///
    /// # Panics
    /// If a component id is out of range or `kinds` and `levels` differ in length.
    pub fn from_assignment(comp_of: Vec<usize>, kinds: &[ComponentKind], levels: &[u32]) -> Self {
        assert_eq!(kinds.len(), levels.len());
        let mut components: Vec<Component> = kinds
            .iter()
            .zip(levels)
            .map(|(&kind, &level)| Component { kind, level, size: 0 })
            .collect();
        for &c in &comp_of {
            components[c].size += 1;
        }
        Partition { comp_of, components }
    }

    pub fn vertex_count(&self) -> usize {
        self.comp_of.len()
    }

    pub fn comp_of(&self) -> &[usize] {
        &self.comp_of
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.comp_of[v]
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: usize) -> &Component {
        &self.components[id]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn vertex_level(&self, v: usize) -> u32 {
        self.components[self.comp_of[v]].level
    }

    /// Highest component level; 0 for an empty graph.
    pub fn max_level(&self) -> u32 {
        self.components.iter().map(|c| c.level).max().unwrap_or(0)
    }

    pub fn level_count(&self) -> usize {
        if self.components.is_empty() {
            0
        } else {
            self.max_level() as usize + 1
        }
    }

    /// Member lists, each in increasing vertex order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.components.len()];
        for (v, &c) in self.comp_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Marks vertices that belong to an SCC of size at least two.
    pub fn scc_membership(&self) -> Vec<bool> {
        self.comp_of
            .iter()
            .map(|&c| self.components[c].kind == ComponentKind::Scc)
            .collect()
    }

    /// Components as sorted member sets with kind and level, sorted.
    pub fn canonical(&self) -> Vec<CanonicalComponent> {
        let mut out: Vec<CanonicalComponent> = self
            .members()
            .into_iter()
            .zip(&self.components)
            .map(|(members, c)| CanonicalComponent {
                members,
                kind: c.kind,
                level: c.level,
            })
            .collect();
        out.sort();
        out
    }
}

/// Longest-path levels of the condensation induced by `comp_of`, or `None`
/// when the condensation has a cycle. Edges inside a component are skipped.
pub(crate) fn condensation_levels(g: &Graph, comp_of: &[usize], count: usize) -> Option<Vec<u32>> {
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut out_left = vec![0usize; count];
    for (u, v) in g.edges() {
        let (cu, cv) = (comp_of[u], comp_of[v]);
        if cu != cv {
            preds[cv].push(cu);
            out_left[cu] += 1;
        }
    }
    let mut level = vec![0u32; count];
    let mut queue: VecDeque<usize> = (0..count).filter(|&c| out_left[c] == 0).collect();
    let mut done = 0usize;
    while let Some(c) = queue.pop_front() {
        done += 1;
        for &p in &preds[c] {
            level[p] = level[p].max(level[c] + 1);
            out_left[p] -= 1;
            if out_left[p] == 0 {
                queue.push_back(p);
            }
        }
    }
    (done == count).then_some(level)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStat {
    pub level: u32,
    pub components: usize,
    pub vertices: usize,
}

/// Summary counts of a partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCensus {
    pub vertices: usize,
    pub edges: usize,
    pub scc_count: usize,
    pub cac_count: usize,
    pub singleton_cac_count: usize,
    pub cac_vertices: usize,
    pub largest_component_size: usize,
    pub largest_component_kind: Option<ComponentKind>,
    pub max_level: u32,
    pub level_count: usize,
    /// Level count of the plain SCC partition, i.e. without merging 1-vertex
    /// components into CACs.
    pub plain_scc_level_count: usize,
    /// `(lower bound, count)` over power-of-two size buckets.
    pub size_histogram: Vec<(usize, usize)>,
    pub level_histogram: Vec<LevelStat>,
}

impl PartitionCensus {
    pub fn new(g: &Graph, p: &Partition) -> Self {
        let plain = plain_scc_partition(g);
        Self::with_plain_levels(g, p, plain.level_count())
    }

    pub fn with_plain_levels(g: &Graph, p: &Partition, plain_scc_level_count: usize) -> Self {
        let comps = p.components();
        let count_kind = |k| comps.iter().filter(|c| c.kind == k).count();
        let largest = comps.iter().max_by_key(|c| c.size);
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        let mut levels: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for c in comps {
            let bucket = 1usize << (usize::BITS - 1 - c.size.leading_zeros());
            *sizes.entry(bucket).or_default() += 1;
            let e = levels.entry(c.level).or_default();
            e.0 += 1;
            e.1 += c.size;
        }
        PartitionCensus {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            scc_count: count_kind(ComponentKind::Scc),
            cac_count: count_kind(ComponentKind::Cac),
            singleton_cac_count: comps
                .iter()
                .filter(|c| c.kind == ComponentKind::Cac && c.size == 1)
                .count(),
            cac_vertices: comps
                .iter()
                .filter(|c| c.kind == ComponentKind::Cac)
                .map(|c| c.size)
                .sum(),
            largest_component_size: largest.map_or(0, |c| c.size),
            largest_component_kind: largest.map(|c| c.kind),
            max_level: p.max_level(),
            level_count: p.level_count(),
            plain_scc_level_count,
            size_histogram: sizes.into_iter().collect(),
            level_histogram: levels
                .into_iter()
                .rev()
                .map(|(level, (components, vertices))| LevelStat {
                    level,
                    components,
                    vertices,
                })
                .collect(),
        }
    }

    /// One-line summary, e.g. `2 SCCs, 2 CACs (1 singleton), max level 2`.
    pub fn summary(&self) -> String {
        format!(
            "{} SCCs, {} CACs ({} singleton{}), max level {}",
            self.scc_count,
            self.cac_count,
            self.singleton_cac_count,
            if self.singleton_cac_count == 1 { "" } else { "s" },
            self.max_level
        )
    }
}

impl fmt::Display for PartitionCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        writeln!(f, "vertices: {}", self.vertices)?;
        writeln!(f, "edges: {}", self.edges)?;
        writeln!(f, "scc_count: {}", self.scc_count)?;
        writeln!(f, "cac_count: {}", self.cac_count)?;
        writeln!(f, "singleton_cac_count: {}", self.singleton_cac_count)?;
        writeln!(f, "cac_vertices: {}", self.cac_vertices)?;
        writeln!(f, "largest_component_size: {}", self.largest_component_size)?;
        if let Some(k) = self.largest_component_kind {
            writeln!(f, "largest_component_kind: {k}")?;
        }
        writeln!(f, "max_level: {}", self.max_level)?;
        writeln!(f, "level_count: {}", self.level_count)?;
        writeln!(f, "plain_scc_level_count: {}", self.plain_scc_level_count)?;
        for (lo, count) in &self.size_histogram {
            writeln!(f, "size_bucket[{lo}..{}]: {count}", lo * 2 - 1)?;
        }
        for l in &self.level_histogram {
            writeln!(
                f,
                "level[{}]: components={} vertices={}",
                l.level, l.components, l.vertices
            )?;
        }
        Ok(())
    }
}
