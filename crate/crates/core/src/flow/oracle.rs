//! Brute-force reference decision on a rational grid.
//!
//! With `m` edges every feasible instance has a solution whose values are
//! multiples of `1/(2m)`, so a dynamic program over that grid decides the
//! question without any of the engine's machinery.

use std::collections::{BTreeMap, HashSet};

use num_rational::Ratio;

use super::{CapacityGraph, Decision, FlowAssignment, FlowError};
use crate::si5::Mod5;

pub const ORACLE_MAX_EDGES: usize = 8;

pub fn oracle_decide(cg: &CapacityGraph) -> Result<Decision, FlowError> {
    let g = cg.graph();
    let m = g.edge_count();
    if m > ORACLE_MAX_EDGES {
        return Err(FlowError::TooManyEdges {
            edges: m,
            limit: ORACLE_MAX_EDGES,
        });
    }
    if m == 0 {
        return Ok(Decision::Feasible(FlowAssignment::default()));
    }
    let scale = 2 * m as i64;
    let modulus = 5 * scale;
    let allowed: Vec<Vec<i64>> = cg
        .sigmas()
        .iter()
        .map(|s| {
            (0..modulus)
                .filter(|&j| s.contains(Mod5::new(Ratio::new(j, scale))))
                .collect()
        })
        .collect();

    let n = g.vertex_count();
    let mut last_use = vec![None; n];
    for (p, e) in g.edges().iter().enumerate() {
        last_use[e.tail] = Some(p);
        last_use[e.head] = Some(p);
    }

    // layers[p] holds the states after edges 0..p, with back-pointers.
    let mut layers: Vec<Vec<(Vec<i64>, usize, i64)>> = vec![vec![(vec![0; n], 0, 0)]];
    for (p, e) in g.edges().iter().enumerate() {
        let mut next: Vec<(Vec<i64>, usize, i64)> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        for (idx, (state, _, _)) in layers[p].iter().enumerate() {
            for &j in &allowed[p] {
                let mut s = state.clone();
                s[e.tail] = (s[e.tail] + j) % modulus;
                s[e.head] = (s[e.head] - j).rem_euclid(modulus);
                let closed = [e.tail, e.head]
                    .iter()
                    .all(|&v| last_use[v] != Some(p) || s[v] == 0);
                if closed && seen.insert(s.clone()) {
                    next.push((s, idx, j));
                }
            }
        }
        if next.is_empty() {
            return Ok(Decision::Infeasible);
        }
        layers.push(next);
    }

    let mut values = BTreeMap::new();
    let mut idx = 0;
    for p in (0..m).rev() {
        let (_, parent, j) = layers[p + 1][idx];
        values.insert(g.edges()[p].id, Mod5::new(Ratio::new(j, scale)));
        idx = parent;
    }
    Ok(Decision::Feasible(FlowAssignment { values }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::verify_flow;
    use crate::graph::Multigraph;
    use crate::si5::named;

    #[test]
    fn small_cases() {
        let single = CapacityGraph::uniform(
            Multigraph::from_edges(2, &[(0, 1)]).unwrap(),
            named("(1,4)"),
        );
        assert_eq!(oracle_decide(&single), Ok(Decision::Infeasible));
        let digon = CapacityGraph::uniform(
            Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap(),
            named("(1,4)"),
        );
        let d = oracle_decide(&digon).unwrap();
        assert!(verify_flow(&digon, d.certificate().unwrap()));
    }

    #[test]
    fn guard() {
        let edges = vec![(0, 1); 9];
        let cg = CapacityGraph::uniform(Multigraph::from_edges(2, &edges).unwrap(), named("(1,4)"));
        assert!(matches!(
            oracle_decide(&cg),
            Err(FlowError::TooManyEdges { .. })
        ));
    }
}
