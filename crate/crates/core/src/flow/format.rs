//! Line-oriented text format for capacity graphs.
//!
//! ```text
//! cg 1
//! # a digon
//! v a
//! v b
//! e 0 a b (1,4)
//! e 1 b a (1,4)
//! t a b
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{CapacityGraph, FlowError};
use crate::graph::{GraphError, Multigraph};
use crate::si5::AtomSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

/// A parsed file: the capacity graph and optional terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityFile {
    pub graph: CapacityGraph,
    pub terminals: Option<(String, String)>,
}

fn err(line: usize, column: usize, msg: impl Into<String>) -> FormatError {
    FormatError {
        line,
        column,
        msg: msg.into(),
    }
}

/// Splits off the next whitespace-delimited token and its address, which
/// the caller turns into a column.
fn token<'a>(rest: &mut &'a str) -> Option<(&'a str, usize)> {
    let trimmed = rest.trim_start();
    if trimmed.is_empty() {
        return None;
    }
    let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
    let column = trimmed.as_ptr() as usize;
    let tok = &trimmed[..end];
    *rest = &trimmed[end..];
    Some((tok, column))
}

pub fn read_capacity_graph(text: &str) -> Result<CapacityFile, FormatError> {
    let mut graph = Multigraph::new();
    let mut sigma = BTreeMap::new();
    let mut terminals = None;
    let mut header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let base = raw.as_ptr() as usize;
        let mut rest = content;
        let col = |tok_col: usize| tok_col - base + 1;
        let Some((kw, kw_col)) = token(&mut rest) else {
            continue;
        };
        let kw_col = col(kw_col);
        if !header {
            let version = token(&mut rest);
            if kw != "cg" || version.map(|v| v.0) != Some("1") {
                return Err(err(line, kw_col, "expected header \"cg 1\""));
            }
            header = true;
            continue;
        }
        let mut need = |what: &str| {
            token(&mut rest)
                .map(|(t, c)| (t, col(c)))
                .ok_or_else(|| err(line, raw.len() + 1, format!("missing {what}")))
        };
        match kw {
            "v" => {
                let (id, c) = need("vertex id")?;
                graph
                    .add_vertex(id)
                    .map_err(|e| err(line, c, e.to_string()))?;
            }
            "e" => {
                let (id, id_col) = need("edge id")?;
                let (tail, tail_col) = need("tail")?;
                let (head, head_col) = need("head")?;
                let id: usize = id
                    .parse()
                    .map_err(|_| err(line, id_col, format!("bad edge id {id:?}")))?;
                let t = graph
                    .vertex(tail)
                    .ok_or_else(|| err(line, tail_col, format!("unknown vertex {tail:?}")))?;
                let h = graph
                    .vertex(head)
                    .ok_or_else(|| err(line, head_col, format!("unknown vertex {head:?}")))?;
                let expr = rest.trim();
                let expr_col = col(rest.as_ptr() as usize + (rest.len() - rest.trim_start().len()));
                if expr.is_empty() {
                    return Err(err(line, raw.len() + 1, "missing capacity set"));
                }
                let set: AtomSet = expr
                    .parse()
                    .map_err(|e| err(line, expr_col, format!("capacity set: {e}")))?;
                graph.add_edge_with_id(id, t, h).map_err(|e| match e {
                    GraphError::DuplicateEdge(_) | GraphError::Loop(..) => {
                        err(line, id_col, e.to_string())
                    }
                    other => err(line, kw_col, other.to_string()),
                })?;
                sigma.insert(id, set);
                continue;
            }
            "t" => {
                let (x, xc) = need("first terminal")?;
                let (y, yc) = need("second terminal")?;
                for (name, c) in [(x, xc), (y, yc)] {
                    if graph.vertex(name).is_none() {
                        return Err(err(line, c, format!("unknown vertex {name:?}")));
                    }
                }
                terminals = Some((x.to_string(), y.to_string()));
            }
            other => return Err(err(line, kw_col, format!("unknown record {other:?}"))),
        }
        if let Some((extra, c)) = token(&mut rest) {
            return Err(err(line, col(c), format!("unexpected {extra:?}")));
        }
    }
    if !header {
        return Err(err(1, 1, "expected header \"cg 1\""));
    }
    let cg = CapacityGraph::new(graph, &sigma).map_err(|e| match e {
        FlowError::NotSymmetric { edge, .. } => {
            let line = text
                .lines()
                .position(|l| {
                    let mut it = l.split_whitespace();
                    it.next() == Some("e") && it.next() == Some(&edge.to_string())
                })
                .map_or(0, |p| p + 1);
            err(line, 1, e.to_string())
        }
        other => err(0, 0, other.to_string()),
    })?;
    Ok(CapacityFile {
        graph: cg,
        terminals,
    })
}

pub fn write_capacity_graph(cg: &CapacityGraph, terminals: Option<(&str, &str)>) -> String {
    let g = cg.graph();
    let mut out = String::from("cg 1\n");
    for l in g.labels() {
        writeln!(out, "v {l}").unwrap();
    }
    for (e, s) in g.edges().iter().zip(cg.sigmas()) {
        writeln!(
            out,
            "e {} {} {} {}",
            e.id,
            g.label(e.tail),
            g.label(e.head),
            s
        )
        .unwrap();
    }
    if let Some((x, y)) = terminals {
        writeln!(out, "t {x} {y}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIGON: &str = "cg 1\n# a digon\nv a\nv b\ne 0 a b (1,4)\ne 1 b a (1,4)  # back\nt a b\n";

    #[test]
    fn round_trip() {
        let f = read_capacity_graph(DIGON).unwrap();
        assert_eq!(f.graph.graph().edge_count(), 2);
        assert_eq!(f.terminals, Some(("a".into(), "b".into())));
        let text = write_capacity_graph(&f.graph, Some(("a", "b")));
        assert_eq!(read_capacity_graph(&text).unwrap(), f);
    }

    #[test]
    fn diagnostics_point_at_the_problem() {
        let e = read_capacity_graph("cg 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = read_capacity_graph("cg 1\nv a\nv b\ne 0 a c (1,4)\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 7));
        let e = read_capacity_graph("cg 1\nv a\nv b\ne 0 a b (1,9)\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 9));
        let e = read_capacity_graph("cg 1\nv a\nv b\ne 0 a b (1,2)\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = read_capacity_graph("cg 1\nv a\n  x a\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = read_capacity_graph("cg 1\nv a\ne 0 a a (1,4)\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
