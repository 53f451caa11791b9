//! The exact search behind [`decide_faithful`].
//!
//! Each edge's set splits into pieces: maximal open arcs `a + (0, L)` and
//! isolated points. Once every edge has a piece, write each arc value as
//! `a + s` with `s` in `(0, L)`. Conservation at `v` then asks for the net
//! outflow of the `s` values to be an integer `k_v` with `k_v = r_v (mod 5)`,
//! where `r_v` collects the integer bases. For a fixed demand vector the
//! strict system `0 < s < L` is feasible iff it has a solution on the grid
//! `1/D` with `D = 2 * (arc edges)`: averaging the extreme integer vertices
//! of the closed polytope gives such a point. So one integral max-flow per
//! demand vector decides it, and the flow itself is the certificate.

use num_rational::Ratio;

use super::maxflow::Network;
use super::{verify_flow, CapacityGraph, Decision, FlowAssignment, FlowError};
use crate::si5::{AtomSet, Mod5, Piece};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_edges: usize,
    pub max_interval_edges: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_edges: 64,
            max_interval_edges: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Search nodes, one per piece tried.
    pub nodes: u64,
    /// Max-flow feasibility tests run.
    pub circulation_calls: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Choice {
    Arc { base: i64, len: i64 },
    Point(i64),
}

fn choices(set: AtomSet) -> Vec<Choice> {
    let mut out = Vec::new();
    for p in set.pieces() {
        match p {
            Piece::Full => out.extend([Choice::Arc { base: 0, len: 5 }, Choice::Point(0)]),
            Piece::Arc { start, .. } => out.push(Choice::Arc {
                base: start as i64,
                len: p.len() as i64,
            }),
            Piece::Point(k) => out.push(Choice::Point(k as i64)),
        }
    }
    out
}

pub fn decide_faithful(cg: &CapacityGraph) -> Result<Decision, FlowError> {
    decide_faithful_with(cg, Guards::default()).map(|(d, _)| d)
}

pub fn decide_faithful_with(
    cg: &CapacityGraph,
    guards: Guards,
) -> Result<(Decision, EngineStats), FlowError> {
    let g = cg.graph();
    let m = g.edge_count();
    if m > guards.max_edges {
        return Err(FlowError::TooManyEdges {
            edges: m,
            limit: guards.max_edges,
        });
    }
    let interval_edges = cg.sigmas().iter().filter(|s| s.mask() & 0x1f != 0).count();
    if interval_edges > guards.max_interval_edges {
        return Err(FlowError::TooManyIntervalEdges {
            edges: interval_edges,
            limit: guards.max_interval_edges,
        });
    }
    let mut search = Search::new(cg);
    if cg.sigmas().iter().any(|s| s.is_empty()) {
        return Ok((Decision::Infeasible, search.stats));
    }
    let decision = match search.run(0) {
        Some(f) => {
            assert!(
                verify_flow(cg, &f),
                "engine produced an invalid certificate"
            );
            Decision::Feasible(f)
        }
        None => Decision::Infeasible,
    };
    Ok((decision, search.stats))
}

struct Search<'a> {
    cg: &'a CapacityGraph,
    choices: Vec<Vec<Choice>>,
    order: Vec<usize>,
    assigned: Vec<Option<Choice>>,
    remaining: Vec<usize>,
    // Per vertex: sum of in-bases minus out-bases, and total arc length in and out.
    residue: Vec<i64>,
    in_len: Vec<i64>,
    out_len: Vec<i64>,
    stats: EngineStats,
}

impl<'a> Search<'a> {
    fn new(cg: &'a CapacityGraph) -> Self {
        let g = cg.graph();
        let n = g.vertex_count();
        let choices: Vec<_> = cg.sigmas().iter().map(|&s| choices(s)).collect();
        let order = edge_order(cg, &choices);
        Search {
            cg,
            choices,
            order,
            assigned: vec![None; g.edge_count()],
            remaining: (0..n).map(|v| g.degree(v)).collect(),
            residue: vec![0; n],
            in_len: vec![0; n],
            out_len: vec![0; n],
            stats: EngineStats::default(),
        }
    }

    fn apply(&mut self, p: usize, c: Choice, sign: i64) {
        let e = self.cg.graph().edges()[p];
        let (base, len) = match c {
            Choice::Arc { base, len } => (base, len),
            Choice::Point(k) => (k, 0),
        };
        self.residue[e.head] += sign * base;
        self.residue[e.tail] -= sign * base;
        self.in_len[e.head] += sign * len;
        self.out_len[e.tail] += sign * len;
        if sign > 0 {
            self.remaining[e.tail] -= 1;
            self.remaining[e.head] -= 1;
            self.assigned[p] = Some(c);
        } else {
            self.remaining[e.tail] += 1;
            self.remaining[e.head] += 1;
            self.assigned[p] = None;
        }
    }

    fn vertex_ok(&self, v: usize) -> bool {
        let (lo, hi, r) = (-self.in_len[v], self.out_len[v], self.residue[v]);
        if lo == 0 && hi == 0 {
            return r.rem_euclid(5) == 0;
        }
        let first = lo + 1 + (r - lo - 1).rem_euclid(5);
        first < hi
    }

    fn run(&mut self, depth: usize) -> Option<FlowAssignment> {
        let Some(&p) = self.order.get(depth) else {
            return self.solve_leaf();
        };
        let e = self.cg.graph().edges()[p];
        for i in 0..self.choices[p].len() {
            let c = self.choices[p][i];
            self.stats.nodes += 1;
            self.apply(p, c, 1);
            let ok = [e.tail, e.head]
                .iter()
                .all(|&v| self.remaining[v] > 0 || self.vertex_ok(v));
            if ok {
                if let Some(f) = self.run(depth + 1) {
                    return Some(f);
                }
            }
            self.apply(p, c, -1);
        }
        None
    }

    fn solve_leaf(&mut self) -> Option<FlowAssignment> {
        let g = self.cg.graph();
        let n = g.vertex_count();
        let mut values = std::collections::BTreeMap::new();
        // Union-find over arc edges.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for (p, e) in g.edges().iter().enumerate() {
            match self.assigned[p].expect("leaf has every edge assigned") {
                Choice::Point(k) => {
                    values.insert(e.id, Mod5::from_int(k));
                }
                Choice::Arc { .. } => {
                    let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
                    parent[a] = b;
                }
            }
        }
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for v in 0..n {
            if self.in_len[v] == 0 && self.out_len[v] == 0 {
                continue;
            }
            let root = find(&mut parent, v);
            if slot[root] == usize::MAX {
                slot[root] = components.len();
                components.push(Vec::new());
            }
            components[slot[root]].push(v);
        }
        for comp in components {
            let arcs: Vec<usize> = (0..g.edge_count())
                .filter(|&p| {
                    matches!(self.assigned[p], Some(Choice::Arc { .. }))
                        && comp.contains(&g.edges()[p].tail)
                })
                .collect();
            let found = self.solve_component(&comp, &arcs)?;
            values.extend(found);
        }
        Some(FlowAssignment { values })
    }

    fn candidates(&self, v: usize) -> Vec<i64> {
        let (lo, hi, r) = (-self.in_len[v], self.out_len[v], self.residue[v]);
        let mut k = lo + 1 + (r - lo - 1).rem_euclid(5);
        let mut out = Vec::new();
        while k < hi {
            out.push(k);
            k += 5;
        }
        out
    }

    fn solve_component(&mut self, comp: &[usize], arcs: &[usize]) -> Option<Vec<(usize, Mod5)>> {
        let cands: Vec<Vec<i64>> = comp.iter().map(|&v| self.candidates(v)).collect();
        let t = comp.len();
        let mut min_suffix = vec![0i64; t + 1];
        let mut max_suffix = vec![0i64; t + 1];
        for i in (0..t).rev() {
            min_suffix[i] = min_suffix[i + 1] + cands[i][0];
            max_suffix[i] = max_suffix[i + 1] + cands[i][cands[i].len() - 1];
        }
        let mut demand = vec![0i64; t];
        self.enumerate(
            comp,
            arcs,
            &cands,
            &min_suffix,
            &max_suffix,
            0,
            0,
            &mut demand,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        comp: &[usize],
        arcs: &[usize],
        cands: &[Vec<i64>],
        min_suffix: &[i64],
        max_suffix: &[i64],
        i: usize,
        partial: i64,
        demand: &mut [i64],
    ) -> Option<Vec<(usize, Mod5)>> {
        if -partial < min_suffix[i] || -partial > max_suffix[i] {
            return None;
        }
        if i + 1 == comp.len() {
            let last = -partial;
            if !cands[i].contains(&last) {
                return None;
            }
            demand[i] = last;
            return self.circulation(comp, arcs, demand);
        }
        for j in 0..cands[i].len() {
            demand[i] = cands[i][j];
            let r = self.enumerate(
                comp,
                arcs,
                cands,
                min_suffix,
                max_suffix,
                i + 1,
                partial + cands[i][j],
                demand,
            );
            if r.is_some() {
                return r;
            }
        }
        None
    }

    /// Integral test of `1 <= s' <= D*L - 1` with net outflow `D * k_v`.
    fn circulation(
        &mut self,
        comp: &[usize],
        arcs: &[usize],
        demand: &[i64],
    ) -> Option<Vec<(usize, Mod5)>> {
        self.stats.circulation_calls += 1;
        let g = self.cg.graph();
        let d = 2 * arcs.len() as i64;
        let local = |v: usize| {
            comp.iter()
                .position(|&w| w == v)
                .expect("vertex in component")
        };
        let (source, sink) = (comp.len(), comp.len() + 1);
        let mut net = Network::new(comp.len() + 2);
        let mut balance: Vec<i64> = demand.iter().map(|k| d * k).collect();
        let mut handles = Vec::with_capacity(arcs.len());
        for &p in arcs {
            let e = g.edges()[p];
            let Some(Choice::Arc { len, .. }) = self.assigned[p] else {
                unreachable!()
            };
            let (t, h) = (local(e.tail), local(e.head));
            handles.push(net.add_arc(t, h, d * len - 2));
            // Shift s' = u + 1 so the lower bound becomes zero.
            balance[t] -= 1;
            balance[h] += 1;
        }
        let mut need = 0;
        for (v, &b) in balance.iter().enumerate() {
            if b > 0 {
                net.add_arc(source, v, b);
                need += b;
            } else if b < 0 {
                net.add_arc(v, sink, -b);
            }
        }
        if net.max_flow(source, sink) != need {
            return None;
        }
        Some(
            arcs.iter()
                .zip(handles)
                .map(|(&p, h)| {
                    let Some(Choice::Arc { base, .. }) = self.assigned[p] else {
                        unreachable!()
                    };
                    let value = Ratio::new(base * d + 1 + net.flow_on(h), d);
                    (g.edges()[p].id, Mod5::new(value))
                })
                .collect(),
        )
    }
}

/// Greedy order: edges that complete a vertex first, then edges touching
/// placed ones, then edges with fewer pieces.
fn edge_order(cg: &CapacityGraph, choices: &[Vec<Choice>]) -> Vec<usize> {
    let g = cg.graph();
    let m = g.edge_count();
    let mut left: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    let mut touched = vec![false; g.vertex_count()];
    let mut placed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let best = (0..m)
            .filter(|&p| !placed[p])
            .min_by_key(|&p| {
                let e = g.edges()[p];
                let closes = [e.tail, e.head].iter().filter(|&&v| left[v] == 1).count();
                let touches = [e.tail, e.head].iter().filter(|&&v| touched[v]).count();
                (
                    std::cmp::Reverse(closes),
                    std::cmp::Reverse(touches),
                    choices[p].len(),
                    p,
                )
            })
            .expect("an unplaced edge remains");
        let e = g.edges()[best];
        placed[best] = true;
        left[e.tail] -= 1;
        left[e.head] -= 1;
        touched[e.tail] = true;
        touched[e.head] = true;
        order.push(best);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;
    use crate::si5::named;

    fn uniform(n: usize, edges: &[(usize, usize)], set: &str) -> CapacityGraph {
        CapacityGraph::uniform(Multigraph::from_edges(n, edges).unwrap(), named(set))
    }

    #[test]
    fn single_edge_is_infeasible() {
        assert_eq!(
            decide_faithful(&uniform(2, &[(0, 1)], "(1,4)")),
            Ok(Decision::Infeasible)
        );
    }

    #[test]
    fn digon_takes_equal_values() {
        let d = decide_faithful(&uniform(2, &[(0, 1), (1, 0)], "(1,4)")).unwrap();
        let f = d.certificate().unwrap();
        assert_eq!(f.get(0), f.get(1));
    }

    #[test]
    fn empty_graph_is_feasible() {
        let d = decide_faithful(&uniform(3, &[], "(1,4)")).unwrap();
        assert_eq!(d, Decision::Feasible(FlowAssignment::default()));
    }

    #[test]
    fn guards_are_enforced() {
        let edges: Vec<_> = (0..5).map(|i| (0, 1 + i % 2)).collect();
        let cg = uniform(3, &edges, "(1,4)");
        let tight = Guards {
            max_edges: 4,
            max_interval_edges: 40,
        };
        assert_eq!(
            decide_faithful_with(&cg, tight),
            Err(FlowError::TooManyEdges { edges: 5, limit: 4 })
        );
        let tight = Guards {
            max_edges: 64,
            max_interval_edges: 2,
        };
        assert!(matches!(
            decide_faithful_with(&cg, tight),
            Err(FlowError::TooManyIntervalEdges { .. })
        ));
    }

    #[test]
    fn full_circle_uses_the_point_zero_too() {
        // A bridge with the full circle: only the value 0 conserves.
        let d = decide_faithful(&uniform(2, &[(0, 1)], "full")).unwrap();
        assert_eq!(d.certificate().unwrap().get(0), Some(Mod5::zero()));
    }

    #[test]
    fn empty_capacity_short_circuits() {
        let d = decide_faithful(&uniform(2, &[(0, 1), (0, 1)], "empty")).unwrap();
        assert_eq!(d, Decision::Infeasible);
    }
}
