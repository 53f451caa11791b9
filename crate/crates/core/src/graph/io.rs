//! graph6 encoding for simple graphs.

use thiserror::Error;

use super::Multigraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {pos}: character {ch:?} outside the graph6 range")]
    BadChar { pos: usize, ch: char },
    #[error("byte {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
    #[error("graph6 encodes simple graphs only; this graph has parallel edges")]
    NotSimple,
}

const HEADER: &str = ">>graph6<<";

fn sixes(text: &str, start: usize, count: usize) -> Result<Vec<u8>, Graph6Error> {
    let bytes = text.as_bytes();
    if bytes.len() < start + count {
        return Err(Graph6Error::Malformed {
            pos: bytes.len(),
            msg: "input ends early".into(),
        });
    }
    bytes[start..start + count]
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if (63..=126).contains(&b) {
                Ok(b - 63)
            } else {
                Err(Graph6Error::BadChar {
                    pos: start + i,
                    ch: b as char,
                })
            }
        })
        .collect()
}

/// Decodes one graph6 line. Vertices are labelled `"0".."n-1"`; edges are
/// oriented from the smaller to the larger index, in graph6 bit order.
pub fn read_graph6(text: &str) -> Result<Multigraph, Graph6Error> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    if text.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let first = sixes(text, 0, 1)?[0];
    let (n, mut pos) = if first < 63 {
        (first as usize, 1)
    } else {
        let second = sixes(text, 1, 1)?[0];
        if second < 63 {
            let d = sixes(text, 1, 3)?;
            (d.iter().fold(0usize, |acc, &x| (acc << 6) | x as usize), 4)
        } else {
            let d = sixes(text, 2, 6)?;
            (d.iter().fold(0usize, |acc, &x| (acc << 6) | x as usize), 8)
        }
    };
    let bits_needed = n * n.saturating_sub(1) / 2;
    let chars = bits_needed.div_ceil(6);
    let data = sixes(text, pos, chars)?;
    pos += chars;
    if pos != text.len() {
        return Err(Graph6Error::Malformed {
            pos,
            msg: "trailing characters".into(),
        });
    }
    let mut g = Multigraph::with_vertices(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if data[k / 6] & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j).expect("distinct endpoints");
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a simple graph in vertex-index order.
pub fn write_graph6(g: &Multigraph) -> Result<String, Graph6Error> {
    if !g.is_simple() {
        return Err(Graph6Error::NotSimple);
    }
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8);
    } else if n < 258_048 {
        out.push(63);
        out.extend((0..3).rev().map(|s| ((n >> (6 * s)) & 63) as u8));
    } else {
        out.extend([63, 63]);
        out.extend((0..6).rev().map(|s| ((n >> (6 * s)) & 63) as u8));
    }
    let mut adj = vec![false; n * n];
    for e in g.edges() {
        adj[e.tail * n + e.head] = true;
        adj[e.head * n + e.tail] = true;
    }
    let mut bits = Vec::new();
    for j in 1..n {
        for i in 0..j {
            bits.push(adj[i * n + j]);
        }
    }
    for chunk in bits.chunks(6) {
        let mut x = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                x |= 1 << (5 - k);
            }
        }
        out.push(x);
    }
    Ok(out.into_iter().map(|b| (b + 63) as char).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_decodes() {
        let g = read_graph6("IsP@OkWHG").unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_cubic());
        assert_eq!(write_graph6(&g).unwrap(), "IsP@OkWHG");
    }

    #[test]
    fn header_and_newline_are_accepted() {
        let g = read_graph6(">>graph6<<C~\n").unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(read_graph6(""), Err(Graph6Error::Empty));
        assert!(matches!(
            read_graph6("I"),
            Err(Graph6Error::Malformed { pos: 1, .. })
        ));
        assert_eq!(
            read_graph6("C "),
            Err(Graph6Error::BadChar { pos: 1, ch: ' ' })
        );
        assert!(matches!(
            read_graph6("C~~"),
            Err(Graph6Error::Malformed { pos: 2, .. })
        ));
    }

    #[test]
    fn multigraphs_are_refused() {
        let g = Multigraph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(write_graph6(&g), Err(Graph6Error::NotSimple));
    }
}
