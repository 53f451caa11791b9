//! From capacity templates to concrete graphs: templates certified by the
//! odd-cycle and alternating-path arguments, substitution of generalised
//! edges, and the 28-vertex snark pipeline.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::capacity::{compute_capacity, petersen_minus_edge, CapacityError};
use crate::flow::{decide_faithful, CapacityGraph, Decision, FlowError};
use crate::graph::{EdgeId, GeneralisedEdge, GraphError, Multigraph};
use crate::si5::{named, AtomSet, Si5Set};
use crate::wheels::build_wheel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertex {0} appears twice")]
    RepeatedVertex(usize),
    #[error("cycle of length {0} is not odd")]
    EvenCycle(usize),
    #[error("too short: {0} vertices")]
    TooShort(usize),
    #[error("vertex {vertex} has {count} edges leaving the cycle, expected one")]
    OffCycleEdges { vertex: usize, count: usize },
    #[error("vertex {0} has a chord inside the cycle")]
    Chord(usize),
    #[error("internal vertex {vertex} has degree {degree}, expected 3")]
    InternalDegree { vertex: usize, degree: usize },
    #[error("capacity {0} does not have measure 2")]
    Measure(String),
    #[error("capacity {0} is not contained in (4,1)")]
    NotInFourOne(String),
    #[error("no edge joins two internal path vertices at even distance")]
    NoEvenChord,
    #[error("the two paths share vertex {0}")]
    PathsMeet(usize),
    #[error("no pair of links at even distance on the first path and odd distance on the second")]
    NoLinkPair,
    #[error("the engine found a faithful flow on the template")]
    TemplateFeasible,
    #[error("piece on edge {edge} has capacity {piece}, not within {allowed}")]
    CapacityMismatch {
        edge: EdgeId,
        piece: String,
        allowed: String,
    },
    #[error("edge {0} is not in the template")]
    UnknownEdge(EdgeId),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<ConstructError>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

/// Which argument certifies a template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    OddCycle {
        cycle: Vec<EdgeId>,
    },
    PathWithChord {
        path: Vec<EdgeId>,
        chord: EdgeId,
    },
    TwoPaths {
        first: Vec<EdgeId>,
        second: Vec<EdgeId>,
        links: [EdgeId; 2],
    },
}

/// A capacity graph the engine has confirmed to carry no faithful flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    cg: CapacityGraph,
    provenance: Provenance,
}

impl Template {
    pub fn capacity_graph(&self) -> &CapacityGraph {
        &self.cg
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Pieces keyed by template edge; edges without a piece stay as they are.
pub type Realisation = BTreeMap<EdgeId, GeneralisedEdge>;

/// Edge ids along a vertex sequence, using each edge at most once.
fn walk(h: &Multigraph, vertices: &[usize], closed: bool) -> Result<Vec<EdgeId>, ConstructError> {
    let mut seen = BTreeSet::new();
    for &v in vertices {
        if !seen.insert(v) {
            return Err(ConstructError::RepeatedVertex(v));
        }
    }
    let steps = if closed {
        vertices.len()
    } else {
        vertices.len().saturating_sub(1)
    };
    let mut used = Vec::with_capacity(steps);
    for i in 0..steps {
        let (u, v) = (vertices[i], vertices[(i + 1) % vertices.len()]);
        let e = h
            .edges()
            .iter()
            .find(|e| {
                ((e.tail == u && e.head == v) || (e.tail == v && e.head == u))
                    && !used.contains(&e.id)
            })
            .ok_or(ConstructError::NotAdjacent(u, v))?;
        used.push(e.id);
    }
    Ok(used)
}

/// `a` on the listed edges and (1,4) everywhere else; fails unless the
/// engine reports no faithful flow.
fn certify(
    h: &Multigraph,
    special: &[EdgeId],
    a: Si5Set,
    provenance: Provenance,
) -> Result<Template, ConstructError> {
    let standard = named("(1,4)").atoms();
    let sigma: BTreeMap<EdgeId, AtomSet> = h
        .edges()
        .iter()
        .map(|e| {
            let s = if special.contains(&e.id) {
                a.atoms()
            } else {
                standard
            };
            (e.id, s)
        })
        .collect();
    let cg = CapacityGraph::new(h.clone(), &sigma)?;
    match decide_faithful(&cg)? {
        Decision::Infeasible => Ok(Template { cg, provenance }),
        Decision::Feasible(_) => Err(ConstructError::TemplateFeasible),
    }
}

fn check_internal_degrees(h: &Multigraph, path: &[usize]) -> Result<(), ConstructError> {
    for &v in &path[1..path.len() - 1] {
        let degree = h.degree(v);
        if degree != 3 {
            return Err(ConstructError::InternalDegree { vertex: v, degree });
        }
    }
    Ok(())
}

fn check_four_one(a: Si5Set) -> Result<(), ConstructError> {
    if a.is_subset(named("(4,1)")) {
        Ok(())
    } else {
        Err(ConstructError::NotInFourOne(a.to_string()))
    }
}

/// An odd cycle of `a`-edges, each cycle vertex with exactly one edge to a
/// vertex off the cycle.
pub fn template_odd_cycle(
    h: &Multigraph,
    cycle: &[usize],
    a: Si5Set,
) -> Result<Template, ConstructError> {
    if cycle.len() < 2 {
        return Err(ConstructError::TooShort(cycle.len()));
    }
    let edges = walk(h, cycle, true)?;
    if cycle.len() % 2 == 0 {
        return Err(ConstructError::EvenCycle(cycle.len()));
    }
    let on_cycle: BTreeSet<usize> = cycle.iter().copied().collect();
    for &v in cycle {
        let off: Vec<_> = h.incident(v).filter(|e| !edges.contains(&e.id)).collect();
        if off.len() != 1 {
            return Err(ConstructError::OffCycleEdges {
                vertex: v,
                count: off.len(),
            });
        }
        if on_cycle.contains(&off[0].other(v)) {
            return Err(ConstructError::Chord(v));
        }
    }
    if a.measure() != 2 {
        return Err(ConstructError::Measure(a.to_string()));
    }
    let provenance = Provenance::OddCycle {
        cycle: edges.clone(),
    };
    certify(h, &edges, a, provenance)
}

/// A path of `a`-edges, `a` within (4,1), with an edge joining two internal
/// vertices at even distance along the path.
pub fn template_path(
    h: &Multigraph,
    path: &[usize],
    a: Si5Set,
) -> Result<Template, ConstructError> {
    if path.len() < 4 {
        return Err(ConstructError::TooShort(path.len()));
    }
    let edges = walk(h, path, false)?;
    check_internal_degrees(h, path)?;
    check_four_one(a)?;
    let pos: BTreeMap<usize, usize> = path.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let internal = |v: usize| {
        pos.get(&v)
            .filter(|&&i| i > 0 && i < path.len() - 1)
            .copied()
    };
    let chord = h
        .edges()
        .iter()
        .filter(|e| !edges.contains(&e.id))
        .find(|e| match (internal(e.tail), internal(e.head)) {
            (Some(i), Some(j)) => i.abs_diff(j) % 2 == 0,
            _ => false,
        })
        .ok_or(ConstructError::NoEvenChord)?
        .id;
    let provenance = Provenance::PathWithChord {
        path: edges.clone(),
        chord,
    };
    certify(h, &edges, a, provenance)
}

/// Two disjoint paths of `a`-edges joined by two edges whose ends lie at
/// even distance on the first path and odd distance on the second.
pub fn template_two_paths(
    h: &Multigraph,
    first: &[usize],
    second: &[usize],
    a: Si5Set,
) -> Result<Template, ConstructError> {
    for p in [first, second] {
        if p.len() < 3 {
            return Err(ConstructError::TooShort(p.len()));
        }
    }
    if let Some(&v) = first.iter().find(|v| second.contains(v)) {
        return Err(ConstructError::PathsMeet(v));
    }
    let e1 = walk(h, first, false)?;
    let e2 = walk(h, second, false)?;
    check_internal_degrees(h, first)?;
    check_internal_degrees(h, second)?;
    check_four_one(a)?;
    let internal = |p: &[usize], v: usize| {
        p.iter()
            .position(|&w| w == v)
            .filter(|&i| i > 0 && i < p.len() - 1)
    };
    // Links as (position on first, position on second, edge id).
    let links: Vec<(usize, usize, EdgeId)> = h
        .edges()
        .iter()
        .filter_map(|e| {
            let fwd = internal(first, e.tail).zip(internal(second, e.head));
            let back = internal(first, e.head).zip(internal(second, e.tail));
            fwd.or(back).map(|(i, j)| (i, j, e.id))
        })
        .collect();
    let pair = links
        .iter()
        .enumerate()
        .flat_map(|(k, l)| links[k + 1..].iter().map(move |m| (l, m)))
        .find(|(l, m)| l.0 != m.0 && l.0.abs_diff(m.0) % 2 == 0 && l.1.abs_diff(m.1) % 2 == 1)
        .ok_or(ConstructError::NoLinkPair)?;
    let special: Vec<EdgeId> = e1.iter().chain(&e2).copied().collect();
    let provenance = Provenance::TwoPaths {
        first: e1,
        second: e2,
        links: [pair.0 .2, pair.1 .2],
    };
    certify(h, &special, a, provenance)
}

/// Replaces each listed template edge `tail -> head` by its piece, source
/// at the tail and sink at the head. Piece vertices are relabelled
/// `e<edge id>.<label>`.
pub fn substitute(t: &Template, r: &Realisation) -> Result<Multigraph, ConstructError> {
    Ok(substitute_capacities(t, r)?.graph().clone())
}

/// Like [`substitute`], keeping the template capacity on edges without a
/// piece and putting (1,4) on every piece edge.
pub fn substitute_capacities(
    t: &Template,
    r: &Realisation,
) -> Result<CapacityGraph, ConstructError> {
    let cg = &t.cg;
    let mut checked: Vec<(&GeneralisedEdge, Si5Set)> = Vec::new();
    for (&id, piece) in r {
        let allowed = cg.sigma(id).ok_or(ConstructError::UnknownEdge(id))?;
        let set = match checked.iter().find(|(p, _)| *p == piece) {
            Some(&(_, s)) => s,
            None => {
                let s = compute_capacity(piece)?.set;
                checked.push((piece, s));
                s
            }
        };
        if !set.atoms().is_subset(allowed) {
            return Err(ConstructError::CapacityMismatch {
                edge: id,
                piece: set.to_string(),
                allowed: allowed.to_string(),
            });
        }
    }
    let mut g = cg.graph().clone();
    let mut sigma = cg.sigma_map();
    let standard = named("(1,4)").atoms();
    for (&id, piece) in r {
        let e = *g.edge(id).ok_or(ConstructError::UnknownEdge(id))?;
        let (tail, head) = (g.label(e.tail).to_string(), g.label(e.head).to_string());
        let p = piece.prefixed(&format!("e{id}."));
        g = g.remove_edge(id)?;
        sigma.remove(&id);
        let (joined, offset) = g.disjoint_union(p.graph())?;
        for pe in p.graph().edges() {
            sigma.insert(pe.id + offset, standard);
        }
        g = joined.identify(&tail, p.source())?;
        g = g.identify(&head, p.sink())?;
    }
    Ok(CapacityGraph::oriented(g, &sigma)?)
}

/// Positions of the five edges at a rim vertex of the substituted wheel:
/// the spoke, then the two edges of the piece leaving the vertex, then the
/// two edges of the piece arriving at it. Piece edges are ordered by the
/// label of their far end.
pub const SPOKE: usize = 0;

/// Which two of the five edges at each rim vertex move to the degree-2
/// side of the expansion. The same local choice is used at all three rim
/// vertices, so the result keeps the rotation of the wheel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split(pub [usize; 2]);

/// One edge of the outgoing piece and one of the incoming piece. Taking
/// both edges of one piece closes a 4-cycle inside the Petersen graph,
/// which is why the split is mixed.
pub const APPENDIX_SPLIT: Split = Split([1, 3]);

/// The K4 seed with Petersen-minus-an-edge on each triangle edge; vertex
/// labels `c`, `x1`..`x3` and `e<rim id>.p<k>`.
pub fn appendix_seed() -> Result<(Template, Multigraph), ConstructError> {
    let stage = |stage: &'static str| {
        move |e: ConstructError| ConstructError::Stage {
            stage,
            source: Box::new(e),
        }
    };
    let k4 = build_wheel(3).expect("W3 exists");
    let t = template_odd_cycle(&k4, &[1, 2, 3], named("(4,1)")).map_err(stage("template"))?;
    let r: Realisation = (0..3).map(|i| (i, petersen_minus_edge())).collect();
    let g = substitute(&t, &r).map_err(stage("substitute"))?;
    Ok((t, g))
}

/// Local edge order at rim vertex `x` of the seed, as described at
/// [`SPOKE`].
fn local_edges(g: &Multigraph, x: &str) -> Vec<EdgeId> {
    let xi = g.vertex(x).expect("rim vertex");
    let far = |id: EdgeId| {
        let e = g.edge(id).expect("incident edge");
        g.label(e.other(xi)).to_string()
    };
    let inc: Vec<_> = g.incident(xi).copied().collect();
    let spoke = inc.iter().find(|e| far(e.id) == "c").expect("spoke").id;
    let mut leaving: Vec<_> = inc
        .iter()
        .filter(|e| e.tail == xi && e.id != spoke)
        .map(|e| e.id)
        .collect();
    let mut arriving: Vec<_> = inc
        .iter()
        .filter(|e| e.head == xi && e.id != spoke)
        .map(|e| e.id)
        .collect();
    leaving.sort_by_key(|&id| far(id));
    arriving.sort_by_key(|&id| far(id));
    let mut out = vec![spoke];
    out.extend(leaving);
    out.extend(arriving);
    out
}

/// Expands each rim vertex `x` into `x.a` (degree 3) and `x.b` (degree 2,
/// taking the edges picked by `split`), then smooths every `x.b`.
pub fn expand_seed(seed: &Multigraph, split: Split) -> Result<Multigraph, ConstructError> {
    let mut g = seed.clone();
    for x in ["x1", "x2", "x3"] {
        let local = local_edges(&g, x);
        if local.len() != 5 {
            return Err(GraphError::NotDegreeTwo(x.to_string(), local.len()).into());
        }
        let mut k = Multigraph::new();
        let (a, b) = (format!("{x}.a"), format!("{x}.b"));
        k.add_vertex(a.clone())?;
        k.add_vertex(b.clone())?;
        let attachment: BTreeMap<EdgeId, String> = local
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                let side = if split.0.contains(&i) { &b } else { &a };
                (id, side.clone())
            })
            .collect();
        g = g.expand(x, &k, &attachment)?;
    }
    for x in ["x1", "x2", "x3"] {
        g = g.smooth(&format!("{x}.b"))?;
    }
    Ok(g.renumbered())
}

/// All ten rotation-invariant splits in lexicographic order.
pub fn splits() -> Vec<Split> {
    (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| Split([i, j])))
        .collect()
}

/// The 28-vertex snark: the certified K4 template, substitution, expansion
/// with [`APPENDIX_SPLIT`] and smoothing.
pub fn build_appendix_snark() -> Result<Multigraph, ConstructError> {
    let (_, seed) = appendix_seed()?;
    expand_seed(&seed, APPENDIX_SPLIT).map_err(|e| ConstructError::Stage {
        stage: "expand",
        source: Box::new(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_has_three_degree_five_vertices() {
        let (t, g) = appendix_seed().unwrap();
        assert!(matches!(t.provenance(), Provenance::OddCycle { cycle } if cycle.len() == 3));
        assert_eq!((g.vertex_count(), g.edge_count()), (28, 45));
        for x in ["x1", "x2", "x3"] {
            assert_eq!(g.degree(g.vertex(x).unwrap()), 5);
            assert_eq!(local_edges(&g, x).len(), 5);
        }
        assert_eq!(g.degree(g.vertex("c").unwrap()), 3);
    }

    #[test]
    fn split_list() {
        let all = splits();
        assert_eq!(all.len(), 10);
        assert!(all.contains(&APPENDIX_SPLIT));
    }
}
