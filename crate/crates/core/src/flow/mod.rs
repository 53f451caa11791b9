//! Deciding whether a capacity-annotated multigraph carries a modular 5-flow
//! whose values respect the per-edge sets.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{EdgeId, Multigraph};
use crate::si5::{Atom, AtomSet, Mod5};

mod engine;
pub mod format;
mod maxflow;
mod oracle;

pub use engine::{decide_faithful, decide_faithful_with, EngineStats, Guards};
pub use oracle::{oracle_decide, ORACLE_MAX_EDGES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("{edges} edges exceed the guard of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("{edges} edges with interval atoms exceed the guard of {limit}")]
    TooManyIntervalEdges { edges: usize, limit: usize },
    #[error("edge {0} has no capacity set")]
    MissingSigma(EdgeId),
    #[error("capacity {set} on edge {edge} is not symmetric")]
    NotSymmetric { edge: EdgeId, set: String },
}

/// A multigraph with a capacity set on every edge. Membership is read
/// relative to each edge's reference orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityGraph {
    graph: Multigraph,
    sigma: Vec<AtomSet>,
}

impl CapacityGraph {
    /// Capacities given per edge id; every set must be symmetric.
    pub fn new(graph: Multigraph, sigma: &BTreeMap<EdgeId, AtomSet>) -> Result<Self, FlowError> {
        let cg = Self::oriented(graph, sigma)?;
        for (e, s) in cg.graph.edges().iter().zip(&cg.sigma) {
            if !s.is_symmetric() {
                return Err(FlowError::NotSymmetric {
                    edge: e.id,
                    set: s.to_string(),
                });
            }
        }
        Ok(cg)
    }

    /// Like [`CapacityGraph::new`] but accepts sets that are not closed
    /// under negation, so the reference orientation matters.
    pub fn oriented(
        graph: Multigraph,
        sigma: &BTreeMap<EdgeId, AtomSet>,
    ) -> Result<Self, FlowError> {
        let sigma = graph
            .edges()
            .iter()
            .map(|e| {
                sigma
                    .get(&e.id)
                    .copied()
                    .ok_or(FlowError::MissingSigma(e.id))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CapacityGraph { graph, sigma })
    }

    pub fn uniform(graph: Multigraph, set: impl Into<AtomSet>) -> Self {
        let set = set.into();
        assert!(set.is_symmetric(), "uniform capacity must be symmetric");
        let sigma = vec![set; graph.edge_count()];
        CapacityGraph { graph, sigma }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn sigma(&self, id: EdgeId) -> Option<AtomSet> {
        self.graph.edge_position(id).map(|p| self.sigma[p])
    }

    /// Capacities in the order of `graph().edges()`.
    pub fn sigmas(&self) -> &[AtomSet] {
        &self.sigma
    }

    pub fn sigma_map(&self) -> BTreeMap<EdgeId, AtomSet> {
        self.graph
            .edges()
            .iter()
            .map(|e| e.id)
            .zip(self.sigma.iter().copied())
            .collect()
    }

    /// Replaces one edge's capacity.
    pub fn with_sigma(&self, id: EdgeId, set: AtomSet) -> Option<CapacityGraph> {
        let p = self.graph.edge_position(id)?;
        let mut cg = self.clone();
        cg.sigma[p] = set;
        Some(cg)
    }

    /// Reverses an edge's reference orientation and negates its set.
    pub fn reversed(&self, id: EdgeId) -> Option<CapacityGraph> {
        let p = self.graph.edge_position(id)?;
        let graph = self.graph.reversed(id).ok()?;
        let mut sigma = self.sigma.clone();
        sigma[p] = sigma[p].negate();
        Some(CapacityGraph { graph, sigma })
    }
}

/// Flow values per edge id, relative to the reference orientation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowAssignment {
    pub values: BTreeMap<EdgeId, Mod5>,
}

impl FlowAssignment {
    pub fn get(&self, id: EdgeId) -> Option<Mod5> {
        self.values.get(&id).copied()
    }

    /// Serialises as `f <edge id> <num>/<den>` lines.
    pub fn to_certificate(&self) -> String {
        let mut out = String::new();
        for (id, v) in &self.values {
            let r = v.value();
            out.push_str(&format!("f {id} {}/{}\n", r.numer(), r.denom()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Feasible(FlowAssignment),
    Infeasible,
}

impl Decision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decision::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&FlowAssignment> {
        match self {
            Decision::Feasible(f) => Some(f),
            Decision::Infeasible => None,
        }
    }
}

/// Exact check of membership on every edge and conservation modulo 5 at
/// every vertex.
pub fn verify_flow(cg: &CapacityGraph, f: &FlowAssignment) -> bool {
    let g = cg.graph();
    let mut net = vec![Mod5::zero(); g.vertex_count()];
    for (e, &s) in g.edges().iter().zip(cg.sigmas()) {
        let Some(v) = f.get(e.id) else { return false };
        if !s.contains(v) {
            return false;
        }
        net[e.tail] = net[e.tail] + v;
        net[e.head] = net[e.head] - v;
    }
    f.values.len() == g.edge_count() && net.iter().all(|x| x.is_zero())
}

/// Searches for a nowhere-zero integer flow modulo 5.
pub fn decide_integer_nz5(g: &Multigraph) -> Result<Decision, FlowError> {
    let nonzero = AtomSet::from_atoms((1..5).map(Atom::Point));
    decide_faithful(&CapacityGraph::uniform(g.clone(), nonzero))
}
