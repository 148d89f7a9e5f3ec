//! Naive reference partition, written straight from the merge rule: SCCs,
//! longest-path levels, then bottom-up merging of 1-vertex heads with every
//! level recomputed after each merge. Intended for small graphs only.

use super::{condensation_levels, ComponentKind, Partition};
use crate::graph::Graph;

/// Kosaraju's two-pass SCC labelling, ignoring self-loops.
/// Returns the component id of every vertex and the component count.
pub fn kosaraju_scc(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let ins = g.in_adjacency();

    // finishing order on the forward graph
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((v, i)) = stack.pop() {
            let nbrs = g.out_neighbors(v);
            if i < nbrs.len() {
                stack.push((v, i + 1));
                let w = nbrs[i];
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }

    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in ins.in_neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Reference SCC/CAC partition; the oracle for [`super::find_components`].
pub fn reference_partition(g: &Graph) -> Partition {
    let n = g.vertex_count();
    let (scc_of, scc_count) = kosaraju_scc(g);
    let mut sizes = vec![0usize; scc_count];
    for &c in &scc_of {
        sizes[c] += 1;
    }

    // comp_of is rewritten on every merge; ids are compacted at the end
    let mut comp_of = scc_of;
    let kind: Vec<ComponentKind> = sizes
        .iter()
        .map(|&s| if s >= 2 { ComponentKind::Scc } else { ComponentKind::Cac })
        .collect();
    let mut size = sizes;
    let mut alive = vec![true; scc_count];

    let mut level_of = condensation_levels(g, &comp_of, kind.len()).expect("SCC condensation is a DAG");
    let mut current = 1u32;
    loop {
        let max_level = (0..kind.len())
            .filter(|&c| alive[c])
            .map(|c| level_of[c])
            .max()
            .unwrap_or(0);
        if current > max_level {
            break;
        }
        let head = (0..n).find(|&v| {
            let c = comp_of[v];
            size[c] == 1
                && kind[c] == ComponentKind::Cac
                && level_of[c] == current
                && mergeable(g, v, &comp_of, &kind, &level_of)
        });
        let Some(v) = head else {
            current += 1;
            continue;
        };
        let head_comp = comp_of[v];
        let below = current - 1;
        let absorbed: Vec<usize> = g
            .out_neighbors(v)
            .iter()
            .map(|&w| comp_of[w])
            .filter(|&c| c != head_comp && level_of[c] == below && kind[c] == ComponentKind::Cac)
            .collect();
        for c in absorbed {
            if !alive[c] {
                continue;
            }
            for x in comp_of.iter_mut().filter(|x| **x == c) {
                *x = head_comp;
            }
            size[head_comp] += size[c];
            size[c] = 0;
            alive[c] = false;
        }
        level_of = condensation_levels(g, &comp_of, kind.len()).expect("merging keeps the condensation acyclic");
    }

    let mut remap = vec![usize::MAX; kind.len()];
    let mut kinds = Vec::new();
    let mut levels = Vec::new();
    for c in comp_of.iter_mut() {
        if remap[*c] == usize::MAX {
            remap[*c] = kinds.len();
            kinds.push(kind[*c]);
            levels.push(level_of[*c]);
        }
        *c = remap[*c];
    }
    Partition::from_assignment(comp_of, &kinds, &levels)
}

/// Whether 1-vertex head `v` may merge under the current assignment.
pub(super) fn mergeable(
    g: &Graph,
    v: usize,
    comp_of: &[usize],
    kind: &[ComponentKind],
    level_of: &[u32],
) -> bool {
    let own = comp_of[v];
    let Some(below) = level_of[own].checked_sub(1) else {
        return false;
    };
    let mut any_cac = false;
    for &w in g.out_neighbors(v) {
        let c = comp_of[w];
        if c == own || level_of[c] != below {
            continue;
        }
        match kind[c] {
            ComponentKind::Scc => return false,
            ComponentKind::Cac => any_cac = true,
        }
    }
    any_cac
}
