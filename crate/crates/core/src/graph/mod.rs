//! Loopless multigraphs with a fixed reference orientation per edge.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

mod io;
mod props;

pub use io::{read_graph6, write_graph6, Graph6Error};
pub use props::CutWitness;

pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {0} would be a loop at {1:?}")]
    Loop(EdgeId, String),
    #[error("no attachment given for edge {0} incident to the expanded vertex")]
    MissingAttachment(EdgeId),
    #[error("vertex {0:?} of the inserted graph clashes with an existing vertex")]
    LabelClash(String),
    #[error("vertex {0:?} has degree {1}, expected 2")]
    NotDegreeTwo(String, usize),
    #[error("smoothing {0:?} would create a loop")]
    SmoothingLoop(String),
    #[error("graph is not cubic")]
    NotCubic,
}

/// An edge stored by vertex position; `tail -> head` is the reference orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Vertices labelled `"0"`, ..., `"n-1"`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex(i.to_string()).expect("fresh labels");
        }
        g
    }

    /// Builds a graph on `n` numbered vertices from `(tail, head)` pairs; edge
    /// ids follow list order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize, GraphError> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(GraphError::DuplicateVertex(label));
        }
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        Ok(i)
    }

    fn next_edge_id(&self) -> EdgeId {
        self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0)
    }

    /// Adds an edge with the next free id and returns that id.
    pub fn add_edge(&mut self, tail: usize, head: usize) -> Result<EdgeId, GraphError> {
        let id = self.next_edge_id();
        self.add_edge_with_id(id, tail, head)?;
        Ok(id)
    }

    pub fn add_edge_with_id(
        &mut self,
        id: EdgeId,
        tail: usize,
        head: usize,
    ) -> Result<(), GraphError> {
        for v in [tail, head] {
            if v >= self.labels.len() {
                return Err(GraphError::UnknownVertex(v.to_string()));
            }
        }
        if tail == head {
            return Err(GraphError::Loop(id, self.labels[tail].clone()));
        }
        if self.edges.iter().any(|e| e.id == id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        self.edges.push(Edge { id, tail, head });
        Ok(())
    }

    pub fn add_edge_between(&mut self, tail: &str, head: &str) -> Result<EdgeId, GraphError> {
        let (t, h) = (self.require(tail)?, self.require(head)?);
        self.add_edge(t, h)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.vertex(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Position of an edge in [`Multigraph::edges`].
    pub fn edge_position(&self, id: EdgeId) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.tail == v || e.head == v)
            .count()
    }

    pub fn incident(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.tail == v || e.head == v)
    }

    /// Incidence lists: for each vertex, positions of incident edges.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.labels.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.tail].push(i);
            inc[e.head].push(i);
        }
        inc
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .all(|e| seen.insert((e.tail.min(e.head), e.tail.max(e.head))))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return true;
        }
        let inc = self.incidence();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &p in &inc[v] {
                let w = self.edges[p].other(v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A copy with every vertex label prefixed.
    pub fn prefixed(&self, prefix: &str) -> Multigraph {
        let mut g = Multigraph::new();
        for l in &self.labels {
            g.add_vertex(format!("{prefix}{l}"))
                .expect("prefixing keeps labels distinct");
        }
        g.edges = self.edges.clone();
        g
    }

    /// Same graph with edge ids renumbered `0..m` in list order.
    pub fn renumbered(&self) -> Multigraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.id = i;
        }
        g
    }

    /// Reverses the reference orientation of one edge.
    pub fn reversed(&self, id: EdgeId) -> Result<Multigraph, GraphError> {
        let mut g = self.clone();
        let e = g
            .edges
            .iter_mut()
            .find(|e| e.id == id)
            .ok_or(GraphError::UnknownEdge(id))?;
        std::mem::swap(&mut e.tail, &mut e.head);
        Ok(g)
    }

    pub fn remove_edge(&self, id: EdgeId) -> Result<Multigraph, GraphError> {
        let pos = self.edge_position(id).ok_or(GraphError::UnknownEdge(id))?;
        let mut g = self.clone();
        g.edges.remove(pos);
        Ok(g)
    }

    /// Removes a vertex and its incident edges.
    pub fn remove_vertex(&self, label: &str) -> Result<Multigraph, GraphError> {
        let x = self.require(label)?;
        let mut g = Multigraph::new();
        for (i, l) in self.labels.iter().enumerate() {
            if i != x {
                g.add_vertex(l.clone())?;
            }
        }
        let shift = |v: usize| if v > x { v - 1 } else { v };
        g.edges = self
            .edges
            .iter()
            .filter(|e| e.tail != x && e.head != x)
            .map(|e| Edge {
                id: e.id,
                tail: shift(e.tail),
                head: shift(e.head),
            })
            .collect();
        Ok(g)
    }

    /// Replaces vertex `x` by the graph `k`. Each edge formerly incident to
    /// `x` keeps its id and is re-attached to `attachment[id]`, a vertex of
    /// `k`. Edges of `k` receive fresh ids.
    pub fn expand(
        &self,
        x: &str,
        k: &Multigraph,
        attachment: &BTreeMap<EdgeId, String>,
    ) -> Result<Multigraph, GraphError> {
        let xi = self.require(x)?;
        let mut g = self.remove_vertex(x)?;
        let mut k_index = Vec::with_capacity(k.vertex_count());
        for l in &k.labels {
            if g.vertex(l).is_some() {
                return Err(GraphError::LabelClash(l.clone()));
            }
            k_index.push(g.add_vertex(l.clone())?);
        }
        let mut next = self.next_edge_id().max(1);
        for e in &k.edges {
            g.add_edge_with_id(next, k_index[e.tail], k_index[e.head])?;
            next += 1;
        }
        for e in self.incident(xi) {
            let target = attachment
                .get(&e.id)
                .ok_or(GraphError::MissingAttachment(e.id))?;
            let t = k
                .vertex(target)
                .ok_or_else(|| GraphError::UnknownVertex(target.clone()))?;
            let t = k_index[t];
            let other = g.require(&self.labels[e.other(xi)])?;
            let (tail, head) = if e.tail == xi { (t, other) } else { (other, t) };
            g.add_edge_with_id(e.id, tail, head)?;
        }
        Ok(g)
    }

    /// Suppresses a degree-2 vertex `x` with neighbours `y != z`; the new
    /// edge `y -> z` reuses the id of the edge between `y` and `x`.
    pub fn smooth(&self, x: &str) -> Result<Multigraph, GraphError> {
        let xi = self.require(x)?;
        let inc: Vec<Edge> = self.incident(xi).copied().collect();
        if inc.len() != 2 {
            return Err(GraphError::NotDegreeTwo(x.to_string(), inc.len()));
        }
        let (y, z) = (inc[0].other(xi), inc[1].other(xi));
        if y == z {
            return Err(GraphError::SmoothingLoop(x.to_string()));
        }
        let (yl, zl) = (self.labels[y].clone(), self.labels[z].clone());
        let mut g = self.remove_vertex(x)?;
        let (y, z) = (g.require(&yl)?, g.require(&zl)?);
        g.add_edge_with_id(inc[0].id, y, z)?;
        Ok(g)
    }

    /// Inserts a new degree-2 vertex `label` on edge `id`. The tail half keeps
    /// the id; the head half gets a fresh one, which is returned.
    pub fn subdivide(&self, id: EdgeId, label: &str) -> Result<(Multigraph, EdgeId), GraphError> {
        let mut g = self.clone();
        let pos = g.edge_position(id).ok_or(GraphError::UnknownEdge(id))?;
        let w = g.add_vertex(label)?;
        let head = g.edges[pos].head;
        g.edges[pos].head = w;
        let fresh = g.add_edge(w, head)?;
        Ok((g, fresh))
    }

    /// Merges vertex `b` into vertex `a`; edges between them would become
    /// loops and are rejected.
    pub fn identify(&self, a: &str, b: &str) -> Result<Multigraph, GraphError> {
        let (ai, bi) = (self.require(a)?, self.require(b)?);
        if let Some(e) = self
            .edges
            .iter()
            .find(|e| (e.tail == ai && e.head == bi) || (e.tail == bi && e.head == ai))
        {
            return Err(GraphError::Loop(e.id, a.to_string()));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            if e.tail == bi {
                e.tail = ai;
            }
            if e.head == bi {
                e.head = ai;
            }
        }
        // Drop b by rebuilding without it; it is now isolated.
        let edges = g.edges.clone();
        g.edges.clear();
        let mut h = g.remove_vertex(b)?;
        let shift = |v: usize| if v > bi { v - 1 } else { v };
        h.edges = edges
            .into_iter()
            .map(|e| Edge {
                id: e.id,
                tail: shift(e.tail),
                head: shift(e.head),
            })
            .collect();
        Ok(h)
    }

    /// Disjoint union; the caller guarantees distinct labels. Edge ids of
    /// `other` are shifted past those of `self`; the shift is returned.
    pub fn disjoint_union(&self, other: &Multigraph) -> Result<(Multigraph, EdgeId), GraphError> {
        let mut g = self.clone();
        let offset = self.next_edge_id();
        let mut map = Vec::with_capacity(other.vertex_count());
        for l in &other.labels {
            if g.vertex(l).is_some() {
                return Err(GraphError::LabelClash(l.clone()));
            }
            map.push(g.add_vertex(l.clone())?);
        }
        for e in &other.edges {
            g.add_edge_with_id(e.id + offset, map[e.tail], map[e.head])?;
        }
        Ok((g, offset))
    }
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph({} vertices: ", self.labels.len())?;
        for e in &self.edges {
            write!(
                f,
                "{}:{}->{} ",
                e.id, self.labels[e.tail], self.labels[e.head]
            )?;
        }
        write!(f, ")")
    }
}

/// A graph with two distinct terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralisedEdge {
    graph: Multigraph,
    source: usize,
    sink: usize,
}

impl GeneralisedEdge {
    pub fn new(graph: Multigraph, source: &str, sink: &str) -> Result<Self, GraphError> {
        let s = graph.require(source)?;
        let t = graph.require(sink)?;
        if s == t {
            return Err(GraphError::Loop(usize::MAX, source.to_string()));
        }
        Ok(GeneralisedEdge {
            graph,
            source: s,
            sink: t,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn source(&self) -> &str {
        self.graph.label(self.source)
    }

    pub fn sink(&self) -> &str {
        self.graph.label(self.sink)
    }

    pub fn terminals(&self) -> (usize, usize) {
        (self.source, self.sink)
    }

    /// The same gadget with terminal order swapped.
    pub fn swapped(&self) -> GeneralisedEdge {
        GeneralisedEdge {
            graph: self.graph.clone(),
            source: self.sink,
            sink: self.source,
        }
    }

    pub fn prefixed(&self, prefix: &str) -> GeneralisedEdge {
        GeneralisedEdge {
            graph: self.graph.prefixed(prefix),
            source: self.source,
            sink: self.sink,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Multigraph {
        Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn loops_and_duplicates_are_rejected() {
        let mut g = Multigraph::with_vertices(2);
        assert!(matches!(g.add_edge(0, 0), Err(GraphError::Loop(..))));
        g.add_edge_with_id(7, 0, 1).unwrap();
        assert_eq!(
            g.add_edge_with_id(7, 1, 0),
            Err(GraphError::DuplicateEdge(7))
        );
        assert_eq!(
            g.add_vertex("1"),
            Err(GraphError::DuplicateVertex("1".into()))
        );
        assert_eq!(g.add_edge(0, 1).unwrap(), 8);
    }

    #[test]
    fn expanding_into_one_vertex_is_a_relabelling() {
        let g = triangle();
        let mut k = Multigraph::new();
        k.add_vertex("k").unwrap();
        let attach: BTreeMap<_, _> = [(0, "k".to_string()), (2, "k".to_string())].into();
        let h = g.expand("0", &k, &attach).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        let e0 = h.edge(0).unwrap();
        assert_eq!(h.label(e0.tail), "k");
        assert_eq!(h.label(e0.head), "1");
        let e2 = h.edge(2).unwrap();
        assert_eq!(h.label(e2.head), "k");
    }

    #[test]
    fn expand_reports_missing_attachment() {
        let g = triangle();
        let mut k = Multigraph::new();
        k.add_vertex("k").unwrap();
        let attach: BTreeMap<_, _> = [(0, "k".to_string())].into();
        assert_eq!(
            g.expand("0", &k, &attach),
            Err(GraphError::MissingAttachment(2))
        );
        assert!(matches!(
            g.expand("9", &k, &attach),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn smoothing_a_path_and_undoing_a_subdivision() {
        let path = Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = path.smooth("1").unwrap();
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.edge_count(), 1);

        let g = triangle();
        let (sub, _) = g.subdivide(1, "mid").unwrap();
        assert_eq!(sub.vertex_count(), 4);
        let back = sub.smooth("mid").unwrap();
        assert_eq!(back.vertex_count(), 3);
        assert_eq!(back.edge_count(), 3);
        let e = back.edge(1).unwrap();
        assert_eq!((back.label(e.tail), back.label(e.head)), ("1", "2"));
    }

    #[test]
    fn smoothing_errors() {
        let g = triangle();
        assert!(g.smooth("0").is_ok());
        let theta = Multigraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let (with_mid, _) = theta.subdivide(0, "m").unwrap();
        assert!(matches!(
            with_mid.smooth("0"),
            Err(GraphError::NotDegreeTwo(_, 3))
        ));
        let two = Multigraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(two.smooth("0"), Err(GraphError::SmoothingLoop("0".into())));
    }

    #[test]
    fn identify_merges_and_refuses_loops() {
        let path = Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let digon = path.identify("0", "2").unwrap();
        assert_eq!(digon.vertex_count(), 2);
        assert_eq!(digon.edge_count(), 2);
        assert!(matches!(
            triangle().identify("0", "1"),
            Err(GraphError::Loop(0, _))
        ));
    }

    #[test]
    fn generalised_edge_needs_distinct_terminals() {
        let g = triangle();
        assert!(GeneralisedEdge::new(g.clone(), "0", "0").is_err());
        let ge = GeneralisedEdge::new(g, "0", "2").unwrap();
        assert_eq!((ge.source(), ge.sink()), ("0", "2"));
        assert_eq!(ge.swapped().source(), "2");
    }
}
