use std::fmt;

use super::reference::{kosaraju_scc, mergeable};
use super::union_find::UnionFind;
use super::{condensation_levels, ComponentKind, Partition};
use crate::graph::Graph;

/// One broken partition invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VertexCount { graph: usize, partition: usize },
    ComponentOutOfRange { vertex: usize, component: usize },
    SizeMismatch { component: usize, recorded: usize, actual: usize },
    SccTooSmall { component: usize },
    NotStronglyConnected { component: usize },
    SplitScc { vertex: usize },
    CacOnCycle { component: usize, vertex: usize },
    CacDisconnected { component: usize },
    CondensationCycle,
    LevelMismatch { component: usize, recorded: u32, longest_path: u32 },
    EdgeNotDescending { src: usize, dst: usize },
    LevelBoundExceeded { max_level: u32, plain_scc_max_level: u32 },
    MergeableHead { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            VertexCount { graph, partition } => {
                write!(f, "partition covers {partition} vertices, graph has {graph}")
            }
            ComponentOutOfRange { vertex, component } => {
                write!(f, "vertex {vertex} assigned to unknown component {component}")
            }
            SizeMismatch { component, recorded, actual } => {
                write!(f, "component {component} records size {recorded}, has {actual}")
            }
            SccTooSmall { component } => write!(f, "SCC component {component} has fewer than 2 vertices"),
            NotStronglyConnected { component } => {
                write!(f, "SCC component {component} is not exactly one strongly connected component")
            }
            SplitScc { vertex } => write!(f, "strongly connected set containing vertex {vertex} is split"),
            CacOnCycle { component, vertex } => {
                write!(f, "CAC component {component} contains vertex {vertex} on a cycle")
            }
            CacDisconnected { component } => write!(f, "CAC component {component} is not weakly connected"),
            CondensationCycle => write!(f, "condensation has a cycle"),
            LevelMismatch { component, recorded, longest_path } => write!(
                f,
                "component {component} has level {recorded}, longest path is {longest_path}"
            ),
            EdgeNotDescending { src, dst } => {
                write!(f, "edge {src}->{dst} does not go to a strictly lower level")
            }
            LevelBoundExceeded { max_level, plain_scc_max_level } => write!(
                f,
                "max level {max_level} exceeds plain SCC max level {plain_scc_max_level}"
            ),
            MergeableHead { vertex } => write!(f, "1-vertex CAC {vertex} can still be merged"),
        }
    }
}

/// Checks every partition invariant against `g`. Empty result means valid.
pub fn validate_partition(g: &Graph, p: &Partition) -> Vec<Violation> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if p.vertex_count() != n {
        out.push(Violation::VertexCount {
            graph: n,
            partition: p.vertex_count(),
        });
        return out;
    }
    let k = p.component_count();
    let comp_of = p.comp_of();
    for (v, &c) in comp_of.iter().enumerate() {
        if c >= k {
            out.push(Violation::ComponentOutOfRange { vertex: v, component: c });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut actual = vec![0usize; k];
    for &c in comp_of {
        actual[c] += 1;
    }
    for (c, comp) in p.components().iter().enumerate() {
        if comp.size != actual[c] {
            out.push(Violation::SizeMismatch {
                component: c,
                recorded: comp.size,
                actual: actual[c],
            });
        }
    }

    let (scc_of, scc_count) = kosaraju_scc(g);
    let mut scc_size = vec![0usize; scc_count];
    for &s in &scc_of {
        scc_size[s] += 1;
    }

    // strongly connected sets must map one-to-one onto SCC components
    let mut comp_of_scc = vec![usize::MAX; scc_count];
    let mut reported = vec![false; scc_count];
    for v in 0..n {
        let s = scc_of[v];
        if scc_size[s] < 2 {
            continue;
        }
        if comp_of_scc[s] == usize::MAX {
            comp_of_scc[s] = comp_of[v];
        } else if comp_of_scc[s] != comp_of[v] && !reported[s] {
            reported[s] = true;
            out.push(Violation::SplitScc { vertex: v });
        }
    }

    let members = p.members();
    let mut weak = UnionFind::new(n);
    for (u, v) in g.edges() {
        if comp_of[u] == comp_of[v] {
            weak.union(u, v);
        }
    }
    for (c, comp) in p.components().iter().enumerate() {
        let ms = &members[c];
        if ms.is_empty() {
            continue;
        }
        match comp.kind {
            ComponentKind::Scc => {
                if ms.len() < 2 {
                    out.push(Violation::SccTooSmall { component: c });
                }
                let s = scc_of[ms[0]];
                if ms.iter().any(|&v| scc_of[v] != s) || scc_size[s] != ms.len() {
                    out.push(Violation::NotStronglyConnected { component: c });
                }
            }
            ComponentKind::Cac => {
                if let Some(&v) = ms.iter().find(|&&v| scc_size[scc_of[v]] >= 2) {
                    out.push(Violation::CacOnCycle { component: c, vertex: v });
                }
                let root = weak.find(ms[0]);
                if ms.iter().any(|&v| weak.find(v) != root) {
                    out.push(Violation::CacDisconnected { component: c });
                }
            }
        }
    }

    let recorded: Vec<u32> = p.components().iter().map(|c| c.level).collect();
    match condensation_levels(g, comp_of, k) {
        None => out.push(Violation::CondensationCycle),
        Some(levels) => {
            for c in 0..k {
                if levels[c] != recorded[c] {
                    out.push(Violation::LevelMismatch {
                        component: c,
                        recorded: recorded[c],
                        longest_path: levels[c],
                    });
                }
            }
        }
    }
    for (u, v) in g.edges() {
        let (cu, cv) = (comp_of[u], comp_of[v]);
        if cu != cv && recorded[cu] <= recorded[cv] {
            out.push(Violation::EdgeNotDescending { src: u, dst: v });
        }
    }

    let plain_max = condensation_levels(g, &scc_of, scc_count)
        .expect("SCC condensation is a DAG")
        .into_iter()
        .max()
        .unwrap_or(0);
    if p.max_level() > plain_max {
        out.push(Violation::LevelBoundExceeded {
            max_level: p.max_level(),
            plain_scc_max_level: plain_max,
        });
    }

    let kinds: Vec<ComponentKind> = p.components().iter().map(|c| c.kind).collect();
    for v in 0..n {
        let c = comp_of[v];
        if actual[c] == 1 && kinds[c] == ComponentKind::Cac && mergeable(g, v, comp_of, &kinds, &recorded) {
            out.push(Violation::MergeableHead { vertex: v });
        }
    }
    out
}
