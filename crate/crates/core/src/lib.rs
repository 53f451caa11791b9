//! Exact decisions about circular nowhere-zero flows below 5.
//!
//! The crate works with capacity-annotated multigraphs: every edge carries a
//! union of open integer intervals of ℝ/5ℤ, and the question is whether a
//! modular 5-flow exists whose value on each edge lies in its set. From that
//! engine it derives open 5-capacities of two-terminal gadgets, the
//! classification of wheels with a constant capacity on an even subgraph,
//! and the construction of snarks whose circular flow number is at least 5.

pub mod capacity;
pub mod construct;
pub mod flow;
pub mod graph;
pub mod si5;
pub mod wheels;
