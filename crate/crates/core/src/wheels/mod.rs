//! Wheels with a constant capacity on an even subgraph.
//!
//! `W_n` has centre `c` (vertex 0) and rim vertices `x1..xn` (vertices
//! `1..=n`). Rim edge `i` runs `x_{i+1} -> x_{i+2}` in 1-based labels, i.e.
//! from rim position `i` to `i + 1` clockwise, and has id `i`; spoke `i` runs
//! `c -> x_{i+1}` and has id `n + i`. An even subgraph `J` is a bit mask over
//! these `2n` edge ids.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::flow::{decide_faithful_with, verify_flow, CapacityGraph, FlowError, Guards};
use crate::graph::Multigraph;
use crate::si5::{enumerate_si5, named, AtomSet, Si5Set};

mod certify;

pub use certify::{
    build_faithful_flow, build_faithful_flow_traced, Branch, CertError, CertificateParams,
};

pub type EdgeMask = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WheelError {
    #[error("wheels need n >= 2, got {0}")]
    TooSmall(usize),
    #[error("J is empty")]
    EmptyJ,
    #[error("J mask {0:#x} uses edges outside the wheel")]
    OutOfRange(EdgeMask),
    #[error("vertex {0} has odd degree in J")]
    OddDegree(String),
}

pub fn rim_mask(n: usize) -> EdgeMask {
    (1 << n) - 1
}

pub fn spoke_bit(n: usize, i: usize) -> EdgeMask {
    1 << (n + i)
}

pub fn build_wheel(n: usize) -> Result<Multigraph, WheelError> {
    if n < 2 {
        return Err(WheelError::TooSmall(n));
    }
    let mut g = Multigraph::new();
    g.add_vertex("c").unwrap();
    for i in 1..=n {
        g.add_vertex(format!("x{i}")).unwrap();
    }
    for i in 0..n {
        g.add_edge_with_id(i, 1 + i, 1 + (i + 1) % n).unwrap();
    }
    for i in 0..n {
        g.add_edge_with_id(n + i, 0, 1 + i).unwrap();
    }
    Ok(g)
}

/// Rotation by `r` and, if `reflect`, the reflection `v -> -v` applied first.
fn transform(n: usize, j: EdgeMask, r: usize, reflect: bool) -> EdgeMask {
    let mut out = 0;
    for i in 0..n {
        if j >> i & 1 == 1 {
            let k = if reflect { (2 * n - i - 1) % n } else { i };
            out |= 1 << ((k + r) % n);
        }
        if j >> (n + i) & 1 == 1 {
            let k = if reflect { (n - i) % n } else { i };
            out |= spoke_bit(n, (k + r) % n);
        }
    }
    out
}

/// Smallest mask in the dihedral orbit of `j`.
pub fn canonical_mask(n: usize, j: EdgeMask) -> EdgeMask {
    (0..n)
        .flat_map(|r| [false, true].map(|f| transform(n, j, r, f)))
        .min()
        .expect("n >= 1")
}

/// All nonempty even subgraphs of `W_n`, as XORs of the `n` triangles
/// `c, x_i, x_{i+1}`; with `up_to_symmetry` one per dihedral orbit.
pub fn enumerate_even_subgraphs(
    n: usize,
    up_to_symmetry: bool,
) -> Result<Vec<EdgeMask>, WheelError> {
    if n < 3 {
        return Err(WheelError::TooSmall(n));
    }
    let triangle = |i: usize| (1 << i) | spoke_bit(n, i) | spoke_bit(n, (i + 1) % n);
    let mut out: Vec<EdgeMask> = (1u64..1 << n)
        .map(|sel| {
            (0..n)
                .filter(|i| sel >> i & 1 == 1)
                .fold(0, |acc, i| acc ^ triangle(i))
        })
        .filter(|&j| !up_to_symmetry || canonical_mask(n, j) == j)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `W_n` with capacity `a` on `J` and (1,4) elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WheelTemplate {
    n: usize,
    j: EdgeMask,
    a: Si5Set,
}

impl WheelTemplate {
    pub fn new(n: usize, j: EdgeMask, a: Si5Set) -> Result<Self, WheelError> {
        if n < 2 {
            return Err(WheelError::TooSmall(n));
        }
        if j == 0 {
            return Err(WheelError::EmptyJ);
        }
        if j >> (2 * n) != 0 {
            return Err(WheelError::OutOfRange(j));
        }
        let g = build_wheel(n)?;
        for v in 0..=n {
            let deg = g.incident(v).filter(|e| j >> e.id & 1 == 1).count();
            if deg % 2 == 1 {
                return Err(WheelError::OddDegree(g.label(v).to_string()));
            }
        }
        Ok(WheelTemplate { n, j, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> EdgeMask {
        self.j
    }

    pub fn a(&self) -> Si5Set {
        self.a
    }

    pub fn in_j(&self, edge: usize) -> bool {
        self.j >> edge & 1 == 1
    }

    pub fn is_rim(&self) -> bool {
        self.j == rim_mask(self.n)
    }

    /// Whether J is a cycle of length 3 (on `W_3`: the rim or a triangle through the centre).
    pub fn is_triangle(&self) -> bool {
        self.j.count_ones() == 3
    }

    pub fn sigma(&self, edge: usize) -> AtomSet {
        if self.in_j(edge) {
            self.a.atoms()
        } else {
            Si5Set::standard().atoms()
        }
    }

    pub fn capacity_graph(&self) -> CapacityGraph {
        let g = build_wheel(self.n).expect("validated");
        let sigma = (0..2 * self.n).map(|e| (e, self.sigma(e))).collect();
        CapacityGraph::new(g, &sigma).expect("SI5 sets are symmetric")
    }
}

impl fmt::Display for WheelTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{} J={:#x} A={}", self.n, self.j, self.a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    Fan(usize),
    Connector(usize),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Fan(l) => write!(f, "F{l}"),
            Item::Connector(m) => write!(f, "C{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    RimCycle,
    Sequence(Vec<Item>),
}

/// An item placed on the rim: it covers rim edges `start..start+edges`
/// (mod n), beginning at rim position `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Segment {
    pub item: Item,
    pub start: usize,
    pub edges: usize,
}

pub(crate) fn segments(wt: &WheelTemplate) -> Option<Vec<Segment>> {
    let n = wt.n;
    if wt.is_rim() {
        return None;
    }
    let spokes: Vec<usize> = (0..n).filter(|&i| wt.in_j(n + i)).collect();
    let mut segs = Vec::with_capacity(spokes.len());
    for (k, &s) in spokes.iter().enumerate() {
        let next = spokes[(k + 1) % spokes.len()];
        let edges = match (next + n - s) % n {
            0 => n,
            d => d,
        };
        let item = if wt.in_j(s) {
            Item::Fan(edges + 1)
        } else {
            Item::Connector(edges - 1)
        };
        segs.push(Segment {
            item,
            start: s,
            edges,
        });
    }
    // Start at the fan holding the lowest-indexed fan vertex.
    let holds = |seg: &Segment, v: usize| (v + n - seg.start) % n <= seg.edges;
    let first = (0..n)
        .find_map(|v| {
            segs.iter()
                .position(|s| matches!(s.item, Item::Fan(_)) && holds(s, v))
        })
        .expect("J has a fan");
    segs.rotate_left(first);
    Some(segs)
}

pub fn decompose(wt: &WheelTemplate) -> Decomposition {
    match segments(wt) {
        None => Decomposition::RimCycle,
        Some(segs) => Decomposition::Sequence(segs.into_iter().map(|s| s.item).collect()),
    }
}

/// True when every graph of the family has circular flow number at least 5,
/// i.e. the template has no faithful flow.
pub fn predicate_cfn5(wt: &WheelTemplate) -> bool {
    let a = wt.a.atoms();
    if a.is_empty() || a == named("(2,3)").atoms() {
        return true;
    }
    let odd = wt.n % 2 == 1;
    if a.is_subset(named("(4,1)").atoms()) {
        let long_connector = match decompose(wt) {
            Decomposition::RimCycle => false,
            Decomposition::Sequence(items) => items
                .iter()
                .any(|i| matches!(i, Item::Connector(m) if *m >= 2)),
        };
        return odd && !long_connector;
    }
    if a.is_subset(named("(1,2)u(3,4)").atoms()) {
        return (odd && wt.n > 3 && wt.is_rim()) || (wt.n == 3 && wt.is_triangle());
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertStatus {
    /// The engine found the template infeasible; nothing to build.
    NotApplicable,
    Verified,
    /// No constructive branch covers this feasible instance.
    NoBranch,
    Failed,
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertStatus::NotApplicable => "n/a",
            CertStatus::Verified => "verified",
            CertStatus::NoBranch => "none",
            CertStatus::Failed => "FAILED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub n: usize,
    pub j: EdgeMask,
    pub a: Si5Set,
    pub predicate: bool,
    pub engine_feasible: bool,
    pub cert: CertStatus,
    pub elapsed: Duration,
}

impl ScanRecord {
    pub fn agrees(&self) -> bool {
        self.predicate != self.engine_feasible
    }

    /// Tab-separated: n, J mask, A, predicate, engine, certificate, elapsed µs.
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{:#x}\t{}\t{}\t{}\t{}\t{}",
            self.n,
            self.j,
            self.a,
            if self.predicate { "cfn>=5" } else { "cfn<5" },
            if self.engine_feasible {
                "feasible"
            } else {
                "infeasible"
            },
            self.cert,
            self.elapsed.as_micros()
        )
    }
}

pub fn scan_instance(wt: &WheelTemplate, guards: Guards) -> Result<ScanRecord, FlowError> {
    let start = Instant::now();
    let predicate = predicate_cfn5(wt);
    let (decision, _) = decide_faithful_with(&wt.capacity_graph(), guards)?;
    let engine_feasible = decision.is_feasible();
    let cert = if !engine_feasible {
        CertStatus::NotApplicable
    } else {
        match build_faithful_flow(wt, &CertificateParams::default()) {
            Ok(f) if verify_flow(&wt.capacity_graph(), &f) => CertStatus::Verified,
            Ok(_) => CertStatus::Failed,
            Err(CertError::NoBranch) | Err(CertError::PredicateHolds) => CertStatus::NoBranch,
            Err(_) => CertStatus::Failed,
        }
    };
    Ok(ScanRecord {
        n: wt.n,
        j: wt.j,
        a: wt.a,
        predicate,
        engine_feasible,
        cert,
        elapsed: start.elapsed(),
    })
}

/// All templates for `3 <= n <= n_max`: each J up to symmetry with each
/// nonempty A.
pub fn scan_templates(n_max: usize) -> Vec<WheelTemplate> {
    let sets: Vec<_> = enumerate_si5()
        .into_iter()
        .filter(|s| !s.atoms().is_empty())
        .collect();
    let mut out = Vec::new();
    for n in 3..=n_max {
        for j in enumerate_even_subgraphs(n, true).expect("n >= 3") {
            for &a in &sets {
                out.push(WheelTemplate::new(n, j, a).expect("cycle-space element"));
            }
        }
    }
    out
}

/// Runs [`scan_instance`] over [`scan_templates`], on the current rayon pool.
pub fn scan(n_max: usize, guards: Guards) -> Result<Vec<ScanRecord>, FlowError> {
    scan_templates(n_max)
        .par_iter()
        .map(|wt| scan_instance(wt, guards))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(n: usize, rims: &[usize], spokes: &[usize]) -> EdgeMask {
        rims.iter().fold(0, |m, &i| m | 1 << i) | spokes.iter().fold(0, |m, &i| m | spoke_bit(n, i))
    }

    #[test]
    fn census_of_even_subgraphs() {
        assert_eq!(enumerate_even_subgraphs(5, false).unwrap().len(), 31);
        assert!(enumerate_even_subgraphs(3, false)
            .unwrap()
            .contains(&rim_mask(3)));
        // W3 = K4: four triangles and three 4-cycles.
        assert_eq!(enumerate_even_subgraphs(3, true).unwrap().len(), 3);
        assert!(enumerate_even_subgraphs(2, false).is_err());
    }

    #[test]
    fn odd_degrees_are_rejected() {
        let fan_rim = mask(4, &[0, 1], &[]);
        assert!(matches!(
            WheelTemplate::new(4, fan_rim, named("(4,1)")),
            Err(WheelError::OddDegree(_))
        ));
        assert_eq!(
            WheelTemplate::new(4, 0, named("(4,1)")),
            Err(WheelError::EmptyJ)
        );
    }

    #[test]
    fn decompositions() {
        let a = named("(4,1)");
        let rim = WheelTemplate::new(5, rim_mask(5), a).unwrap();
        assert_eq!(decompose(&rim), Decomposition::RimCycle);
        let tri = WheelTemplate::new(3, mask(3, &[0], &[0, 1]), a).unwrap();
        assert_eq!(
            decompose(&tri),
            Decomposition::Sequence(vec![Item::Fan(2), Item::Connector(1)])
        );
        // W9: fans on x1x2 and x4x5x6, connectors x2..x4 and x6..x1 (through x7, x8, x9).
        let j = mask(9, &[0, 3, 4], &[0, 1, 3, 5]);
        let w9 = WheelTemplate::new(9, j, a).unwrap();
        assert_eq!(
            decompose(&w9),
            Decomposition::Sequence(vec![
                Item::Fan(2),
                Item::Connector(1),
                Item::Fan(3),
                Item::Connector(3)
            ])
        );
        // A fan wrapping past x_n still comes first when it holds x1.
        let wrap = WheelTemplate::new(5, mask(5, &[4, 0], &[4, 1]), a).unwrap();
        assert_eq!(
            decompose(&wrap),
            Decomposition::Sequence(vec![Item::Fan(3), Item::Connector(2)])
        );
    }

    #[test]
    fn predicate_rows() {
        let a41 = named("(4,1)");
        let a1234 = named("(1,2)u(3,4)");
        assert!(predicate_cfn5(
            &WheelTemplate::new(3, rim_mask(3), a41).unwrap()
        ));
        for j in enumerate_even_subgraphs(6, false).unwrap() {
            assert!(!predicate_cfn5(&WheelTemplate::new(6, j, a41).unwrap()));
        }
        assert!(predicate_cfn5(
            &WheelTemplate::new(7, rim_mask(7), a1234).unwrap()
        ));
        assert!(!predicate_cfn5(
            &WheelTemplate::new(8, rim_mask(8), a1234).unwrap()
        ));
        let c2 = WheelTemplate::new(5, mask(5, &[0], &[0, 1]), a41).unwrap();
        assert_eq!(
            decompose(&c2),
            Decomposition::Sequence(vec![Item::Fan(2), Item::Connector(3)])
        );
        assert!(!predicate_cfn5(&c2));
        assert!(predicate_cfn5(
            &WheelTemplate::new(2, rim_mask(2), named("(2,3)")).unwrap()
        ));
    }

    #[test]
    fn record_line() {
        let r = ScanRecord {
            n: 5,
            j: 0x1f,
            a: named("(4,1)"),
            predicate: true,
            engine_feasible: false,
            cert: CertStatus::NotApplicable,
            elapsed: Duration::from_micros(12),
        };
        assert_eq!(r.to_line(), "5\t0x1f\t(4,1)\tcfn>=5\tinfeasible\tn/a\t12");
        assert!(r.agrees());
    }
}
