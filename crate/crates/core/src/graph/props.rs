use std::collections::VecDeque;

use super::{EdgeId, GraphError, Multigraph};

/// A set of fewer than `k` edges whose removal leaves two components that
/// both contain a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutWitness {
    pub edges: Vec<EdgeId>,
}

impl Multigraph {
    pub fn is_cubic(&self) -> bool {
        (0..self.vertex_count()).all(|v| self.degree(v) == 3)
    }

    /// Length of a shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let inc = self.incidence();
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for (skip, e) in self.edges.iter().enumerate() {
            // Shortest u-v path avoiding this edge closes a cycle through it.
            let mut dist = vec![usize::MAX; n];
            dist[e.tail] = 0;
            let mut queue = VecDeque::from([e.tail]);
            while let Some(v) = queue.pop_front() {
                if v == e.head || best.is_some_and(|b| dist[v] + 1 >= b) {
                    break;
                }
                for &p in &inc[v] {
                    if p == skip {
                        continue;
                    }
                    let w = self.edges[p].other(v);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if dist[e.head] != usize::MAX {
                let len = dist[e.head] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }

    /// Whether a proper 3-edge-colouring exists, by exhaustive backtracking.
    pub fn chromatic_index_3(&self) -> Result<bool, GraphError> {
        if !self.is_cubic() {
            return Err(GraphError::NotCubic);
        }
        let m = self.edge_count();
        if m == 0 {
            return Ok(true);
        }
        let order = self.edge_bfs_order();
        let mut used = vec![0u8; self.vertex_count()];
        let mut colour = vec![u8::MAX; m];
        Ok(self.colour_from(&order, 0, &mut used, &mut colour))
    }

    fn colour_from(&self, order: &[usize], i: usize, used: &mut [u8], colour: &mut [u8]) -> bool {
        let Some(&p) = order.get(i) else { return true };
        let e = self.edges[p];
        // The first edge can take colour 0 without loss of generality.
        let choices: &[u8] = if i == 0 { &[0] } else { &[0, 1, 2] };
        for &c in choices {
            let bit = 1 << c;
            if used[e.tail] & bit != 0 || used[e.head] & bit != 0 {
                continue;
            }
            used[e.tail] |= bit;
            used[e.head] |= bit;
            colour[p] = c;
            if self.colour_from(order, i + 1, used, colour) {
                return true;
            }
            used[e.tail] &= !bit;
            used[e.head] &= !bit;
            colour[p] = u8::MAX;
        }
        false
    }

    /// Edge positions in an order where each edge (after the first in its
    /// component) touches an earlier one.
    fn edge_bfs_order(&self) -> Vec<usize> {
        let inc = self.incidence();
        let mut placed = vec![false; self.edge_count()];
        let mut seen = vec![false; self.vertex_count()];
        let mut order = Vec::with_capacity(self.edge_count());
        for root in 0..self.vertex_count() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &p in &inc[v] {
                    if !placed[p] {
                        placed[p] = true;
                        order.push(p);
                    }
                    let w = self.edges[p].other(v);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }

    /// Smallest cyclic cut with fewer than `k` edges, if any.
    pub fn cyclic_cut_below(&self, k: usize) -> Result<Option<CutWitness>, GraphError> {
        if !self.is_cubic() {
            return Err(GraphError::NotCubic);
        }
        let m = self.edge_count();
        for size in 0..k.min(m + 1) {
            let mut chosen = Vec::with_capacity(size);
            if let Some(cut) = self.search_cut(size, 0, &mut chosen) {
                let edges = cut.into_iter().map(|p| self.edges[p].id).collect();
                return Ok(Some(CutWitness { edges }));
            }
        }
        Ok(None)
    }

    fn search_cut(&self, size: usize, from: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
        if chosen.len() == size {
            return self.splits_two_cycles(chosen).then(|| chosen.clone());
        }
        for p in from..self.edge_count() {
            chosen.push(p);
            if let Some(c) = self.search_cut(size, p + 1, chosen) {
                return Some(c);
            }
            chosen.pop();
        }
        None
    }

    /// Whether removing the given edge positions leaves at least two
    /// components that contain a cycle.
    fn splits_two_cycles(&self, removed: &[usize]) -> bool {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        let mut cyclic = vec![false; n];
        for (p, e) in self.edges.iter().enumerate() {
            if removed.contains(&p) {
                continue;
            }
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a == b {
                cyclic[a] = true;
            } else {
                parent[a] = b;
                cyclic[b] |= cyclic[a];
            }
        }
        let roots = (0..n)
            .filter(|&v| find(&mut parent, v) == v && cyclic[v])
            .count();
        roots >= 2
    }

    /// True when no cyclic edge cut has fewer than `k` edges. Graphs without
    /// any cyclic cut (such as K4) satisfy this for every `k`.
    pub fn cyclic_edge_connectivity_at_least(&self, k: usize) -> Result<bool, GraphError> {
        Ok(self.cyclic_cut_below(k)?.is_none())
    }

    pub fn is_snark(&self) -> bool {
        self.is_cubic()
            && self.is_connected()
            && self.girth().is_some_and(|g| g >= 5)
            && self.cyclic_edge_connectivity_at_least(4) == Ok(true)
            && self.chromatic_index_3() == Ok(false)
    }
}
