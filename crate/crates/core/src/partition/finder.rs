//! Iterative Tarjan search that also assigns levels and merges 1-vertex
//! components into connected acyclic components during the finish step.

use super::union_find::UnionFind;
use super::{Component, ComponentKind, Partition};
use crate::graph::Graph;

/// Work counters recorded by one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DfsCounters {
    /// Non-loop edges processed in the explore step.
    pub explore_edge_visits: usize,
    /// Non-loop edges inspected while checking merges of 1-vertex heads.
    pub merge_edge_visits: usize,
    pub finishes: usize,
    pub merges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinderOptions {
    /// Merge 1-vertex heads into CACs. Off yields the plain SCC partition.
    pub merge_cacs: bool,
}

impl Default for FinderOptions {
    fn default() -> Self {
        FinderOptions { merge_cacs: true }
    }
}

/// Per-vertex search state. Levels are 1-based while the search runs.
struct DfsState<'g> {
    g: &'g Graph,
    options: FinderOptions,
    /// Discovery order, 1-based; 0 = undiscovered.
    index: Vec<u32>,
    lowlink: Vec<u32>,
    /// Vertex level while on the stack; authoritative at union-find roots
    /// once the vertex belongs to a component.
    level: Vec<u32>,
    /// Component kind, meaningful at roots of finished components.
    kind: Vec<Option<ComponentKind>>,
    placed: Vec<bool>,
    sets: UnionFind,
    tarjan_stack: Vec<usize>,
    next_index: u32,
    counters: DfsCounters,
}

impl<'g> DfsState<'g> {
    fn new(g: &'g Graph, options: FinderOptions) -> Self {
        let n = g.vertex_count();
        DfsState {
            g,
            options,
            index: vec![0; n],
            lowlink: vec![0; n],
            level: vec![0; n],
            kind: vec![None; n],
            placed: vec![false; n],
            sets: UnionFind::new(n),
            tarjan_stack: Vec::new(),
            next_index: 1,
            counters: DfsCounters::default(),
        }
    }

    fn discover(&mut self, v: usize) {
        self.index[v] = self.next_index;
        self.lowlink[v] = self.next_index;
        self.level[v] = 1;
        self.next_index += 1;
        self.tarjan_stack.push(v);
    }

    /// Explore-step update for edge `(v, w)` once `w` has been searched.
    fn absorb_edge(&mut self, v: usize, w: usize) {
        self.counters.explore_edge_visits += 1;
        if self.placed[w] {
            let r = self.sets.find(w);
            self.level[v] = self.level[v].max(self.level[r] + 1);
        } else {
            self.level[v] = self.level[v].max(self.level[w]);
            self.lowlink[v] = self.lowlink[v].min(self.lowlink[w]);
        }
    }

    fn finish(&mut self, v: usize) {
        self.counters.finishes += 1;
        if self.lowlink[v] != self.index[v] {
            return;
        }
        let head_level = self.level[v];
        let mut size = 0usize;
        loop {
            let w = self.tarjan_stack.pop().expect("head is on the stack");
            self.placed[w] = true;
            self.sets.union(w, v);
            size += 1;
            if w == v {
                break;
            }
        }
        let root = self.sets.find(v);
        self.level[root] = head_level;
        if size >= 2 {
            self.kind[root] = Some(ComponentKind::Scc);
            return;
        }
        self.kind[root] = Some(ComponentKind::Cac);
        if self.options.merge_cacs && head_level >= 2 {
            self.try_merge_head(v, head_level);
        }
    }

    /// Merges head `v` with every CAC one level below it, unless an SCC
    /// one level below is also a neighbor.
    fn try_merge_head(&mut self, v: usize, head_level: u32) {
        let below = head_level - 1;
        let mut targets: Vec<usize> = Vec::new();
        for &w in self.g.out_neighbors(v) {
            if w == v {
                continue;
            }
            self.counters.merge_edge_visits += 1;
            let r = self.sets.find(w);
            if self.level[r] != below {
                continue;
            }
            match self.kind[r] {
                Some(ComponentKind::Scc) => return,
                Some(ComponentKind::Cac) => targets.push(r),
                None => unreachable!("out-neighbor of a finished head is placed"),
            }
        }
        if targets.is_empty() {
            return;
        }
        for r in targets {
            self.sets.union(v, r);
        }
        let root = self.sets.find(v);
        self.level[root] = below;
        self.kind[root] = Some(ComponentKind::Cac);
        self.counters.merges += 1;
    }

    fn search_from(&mut self, start: usize) {
        let g = self.g;
        let offsets = g.out_offsets();
        let targets = g.out_targets();
        // (vertex, cursor into out_targets)
        let mut frames: Vec<(usize, usize)> = Vec::new();
        self.discover(start);
        frames.push((start, offsets[start]));
        while let Some(top) = frames.len().checked_sub(1) {
            let (v, pos) = frames[top];
            if pos == offsets[v + 1] {
                frames.pop();
                self.finish(v);
                continue;
            }
            let w = targets[pos];
            if w == v {
                frames[top].1 += 1;
                continue;
            }
            if self.index[w] == 0 {
                // cursor stays; the edge is absorbed when w's frame returns
                self.discover(w);
                frames.push((w, offsets[w]));
                continue;
            }
            frames[top].1 += 1;
            self.absorb_edge(v, w);
        }
    }

    fn into_partition(mut self) -> (Partition, DfsCounters) {
        let n = self.g.vertex_count();
        let mut comp_id = vec![usize::MAX; n];
        let mut comp_of = vec![0usize; n];
        let mut components: Vec<Component> = Vec::new();
        for v in 0..n {
            let h = self.sets.find(v);
            if comp_id[h] == usize::MAX {
                comp_id[h] = components.len();
                components.push(Component {
                    kind: self.kind[h].expect("every vertex is placed"),
                    level: self.level[h] - 1,
                    size: 0,
                });
            }
            comp_of[v] = comp_id[h];
            components[comp_id[h]].size += 1;
        }
        (Partition::from_raw(comp_of, components), self.counters)
    }
}

/// Unique SCC/CAC partition with component levels.
pub fn find_components(g: &Graph) -> Partition {
    find_components_with(g, FinderOptions::default()).0
}

/// Plain SCC partition (size-1 SCCs reported as CACs), no merging.
pub fn plain_scc_partition(g: &Graph) -> Partition {
    find_components_with(g, FinderOptions { merge_cacs: false }).0
}

pub fn find_components_with(g: &Graph, options: FinderOptions) -> (Partition, DfsCounters) {
    let mut state = DfsState::new(g, options);
    for v in 0..g.vertex_count() {
        if state.index[v] == 0 {
            state.search_from(v);
        }
    }
    state.into_partition()
}
