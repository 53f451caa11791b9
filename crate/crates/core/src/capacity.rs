//! Open 5-capacities of two-terminal gadgets and their composition.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::flow::{
    decide_faithful_with, CapacityGraph, Decision, FlowAssignment, FlowError, Guards,
};
use crate::graph::{EdgeId, GeneralisedEdge, GraphError, Multigraph};
use crate::si5::{named, Atom, AtomSet, Si5Set};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapacityError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no gadget for {target} within {budget} pieces")]
    NotFoundWithinBudget { target: String, budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityResult {
    pub set: Si5Set,
    /// A flow on the augmented graph for each attainable atom.
    pub witnesses: BTreeMap<Atom, FlowAssignment>,
    /// Id of the added terminal edge in the witnesses.
    pub extra_edge: EdgeId,
}

/// Two vertices `x`, `y` and one edge.
pub fn standard_edge() -> GeneralisedEdge {
    let mut g = Multigraph::new();
    g.add_vertex("x").unwrap();
    g.add_vertex("y").unwrap();
    g.add_edge(0, 1).unwrap();
    GeneralisedEdge::new(g, "x", "y").unwrap()
}

/// K4 minus the edge `uv`, with terminals `u` and `v`.
pub fn k4_gadget() -> GeneralisedEdge {
    let mut g = Multigraph::new();
    for l in ["u", "v", "a", "b"] {
        g.add_vertex(l).unwrap();
    }
    for (s, t) in [("u", "a"), ("u", "b"), ("a", "v"), ("b", "v"), ("a", "b")] {
        g.add_edge_between(s, t).unwrap();
    }
    GeneralisedEdge::new(g, "u", "v").unwrap()
}

/// The Petersen graph without the edge between outer vertices 0 and 1.
pub fn petersen_minus_edge() -> GeneralisedEdge {
    let mut g = Multigraph::new();
    for i in 0..10 {
        g.add_vertex(format!("p{i}")).unwrap();
    }
    for i in 0..5 {
        if i != 0 {
            g.add_edge(i, (i + 1) % 5).unwrap();
        }
        g.add_edge(i, i + 5).unwrap();
        g.add_edge(i + 5, (i + 2) % 5 + 5).unwrap();
    }
    GeneralisedEdge::new(g, "p0", "p1").unwrap()
}

/// The terminal edge plus the gadget, every gadget edge constrained to
/// (1,4) and the terminal edge to `atom`.
fn augmented(ge: &GeneralisedEdge, atom: Atom) -> Result<(CapacityGraph, EdgeId), CapacityError> {
    let mut g = ge.graph().clone();
    let (x, y) = ge.terminals();
    let extra = g.add_edge(x, y)?;
    let standard = Si5Set::standard().atoms();
    let sigma: BTreeMap<_, _> = g
        .edges()
        .iter()
        .map(|e| {
            (
                e.id,
                if e.id == extra {
                    AtomSet::from_atoms([atom])
                } else {
                    standard
                },
            )
        })
        .collect();
    Ok((CapacityGraph::oriented(g, &sigma)?, extra))
}

pub fn compute_capacity(ge: &GeneralisedEdge) -> Result<CapacityResult, CapacityError> {
    compute_capacity_with(ge, Guards::default())
}

pub fn compute_capacity_with(
    ge: &GeneralisedEdge,
    guards: Guards,
) -> Result<CapacityResult, CapacityError> {
    let mut set = AtomSet::EMPTY;
    let mut witnesses = BTreeMap::new();
    let mut extra_edge = 0;
    for atom in Atom::ALL {
        let (cg, extra) = augmented(ge, atom)?;
        extra_edge = extra;
        if let (Decision::Feasible(f), _) = decide_faithful_with(&cg, guards)? {
            set.insert(atom);
            witnesses.insert(atom, f);
        }
    }
    assert!(
        set.is_valid_union() && set.is_symmetric(),
        "capacity {set} is not in SI5"
    );
    let set = Si5Set::new(set).expect("checked above");
    Ok(CapacityResult {
        set,
        witnesses,
        extra_edge,
    })
}

/// `a` then `b`: a's second terminal is merged with b's first.
pub fn series(a: &GeneralisedEdge, b: &GeneralisedEdge) -> Result<GeneralisedEdge, CapacityError> {
    let (pa, pb) = (a.prefixed("a."), b.prefixed("b."));
    let (g, _) = pa.graph().disjoint_union(pb.graph())?;
    let g = g.identify(pa.sink(), pb.source())?;
    Ok(GeneralisedEdge::new(g, pa.source(), pb.sink())?)
}

/// Both terminal pairs merged.
pub fn parallel(
    a: &GeneralisedEdge,
    b: &GeneralisedEdge,
) -> Result<GeneralisedEdge, CapacityError> {
    let (pa, pb) = (a.prefixed("a."), b.prefixed("b."));
    let (g, _) = pa.graph().disjoint_union(pb.graph())?;
    let g = g
        .identify(pa.source(), pb.source())?
        .identify(pa.sink(), pb.sink())?;
    Ok(GeneralisedEdge::new(g, pa.source(), pa.sink())?)
}

/// Merges the two terminals; an edge joining them would become a loop.
pub fn identify_terminals(ge: &GeneralisedEdge) -> Result<Multigraph, CapacityError> {
    Ok(ge.graph().identify(ge.source(), ge.sink())?)
}

/// A composition of base gadgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Standard,
    K4,
    PetersenMinusEdge,
    Series(Box<Recipe>, Box<Recipe>),
    Parallel(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    pub fn build(&self) -> GeneralisedEdge {
        match self {
            Recipe::Standard => standard_edge(),
            Recipe::K4 => k4_gadget(),
            Recipe::PetersenMinusEdge => petersen_minus_edge(),
            Recipe::Series(a, b) => {
                series(&a.build(), &b.build()).expect("disjoint gadgets compose")
            }
            Recipe::Parallel(a, b) => {
                parallel(&a.build(), &b.build()).expect("disjoint gadgets compose")
            }
        }
    }

    pub fn pieces(&self) -> usize {
        match self {
            Recipe::Series(a, b) | Recipe::Parallel(a, b) => a.pieces() + b.pieces(),
            _ => 1,
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Standard => f.write_str("standard"),
            Recipe::K4 => f.write_str("k4"),
            Recipe::PetersenMinusEdge => f.write_str("petersen-e"),
            Recipe::Series(a, b) => write!(f, "series({a}, {b})"),
            Recipe::Parallel(a, b) => write!(f, "parallel({a}, {b})"),
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    recipe: Recipe,
    edges: usize,
}

/// Finds the cheapest composition (by edge count) of base gadgets using at
/// most `budget` pieces whose capacity, by the series-intersection and
/// parallel-sum rules, is `target`.
pub fn plan_capacity(target: Si5Set, budget: usize) -> Option<Recipe> {
    let bases = [
        (named("(1,4)"), Recipe::Standard, 1),
        (named("(2,3)u(3,2)"), Recipe::K4, 5),
        (named("(4,1)"), Recipe::PetersenMinusEdge, 14),
    ];
    // best[p][set] = cheapest recipe with exactly p pieces.
    let mut best: Vec<BTreeMap<u16, Entry>> = vec![BTreeMap::new(); budget + 1];
    if budget == 0 {
        return None;
    }
    for (set, recipe, edges) in bases {
        best[1].insert(set.atoms().mask(), Entry { recipe, edges });
    }
    for p in 2..=budget {
        let mut level: BTreeMap<u16, Entry> = BTreeMap::new();
        for i in 1..p {
            let (left, right) = (&best[i], &best[p - i]);
            for (&sa, ea) in left {
                for (&sb, eb) in right {
                    let (a, b) = (AtomSet::from_mask(sa), AtomSet::from_mask(sb));
                    let edges = ea.edges + eb.edges;
                    let candidates = [
                        (
                            a.intersect(b),
                            Recipe::Series(
                                Box::new(ea.recipe.clone()),
                                Box::new(eb.recipe.clone()),
                            ),
                        ),
                        (
                            a.minkowski_sum(b),
                            Recipe::Parallel(
                                Box::new(ea.recipe.clone()),
                                Box::new(eb.recipe.clone()),
                            ),
                        ),
                    ];
                    for (set, recipe) in candidates {
                        let better = level.get(&set.mask()).is_none_or(|e| edges < e.edges);
                        if better {
                            level.insert(set.mask(), Entry { recipe, edges });
                        }
                    }
                }
            }
        }
        best[p] = level;
    }
    best.iter()
        .filter_map(|level| level.get(&target.atoms().mask()))
        .min_by_key(|e| e.edges)
        .map(|e| e.recipe.clone())
}

/// Builds a gadget of capacity `target` and confirms it with
/// [`compute_capacity`].
pub fn realize_capacity(
    target: Si5Set,
    budget: usize,
) -> Result<(GeneralisedEdge, Recipe), CapacityError> {
    let recipe =
        plan_capacity(target, budget).ok_or_else(|| CapacityError::NotFoundWithinBudget {
            target: target.to_string(),
            budget,
        })?;
    let ge = recipe.build();
    let got = compute_capacity(&ge)?;
    assert_eq!(
        got.set, target,
        "composition rule disagrees with the engine for {recipe}"
    );
    Ok((ge, recipe))
}
