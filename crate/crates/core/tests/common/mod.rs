#![allow(dead_code)]

use std::collections::BTreeSet;

use cfn5::graph::Multigraph;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn petersen() -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Multigraph::from_edges(10, &edges).unwrap()
}

pub fn k4() -> Multigraph {
    Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]).unwrap()
}

pub fn cycle(n: usize) -> Multigraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Multigraph::from_edges(n, &edges).unwrap()
}

/// Prism over an `n`-cycle (`n >= 3`), or its Möbius twist.
pub fn ladder(n: usize, twisted: bool) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, i + n));
        if i + 1 < n {
            edges.push((i, i + 1));
            edges.push((i + n, i + n + 1));
        }
    }
    if twisted {
        edges.push((n - 1, n));
        edges.push((2 * n - 1, 0));
    } else {
        edges.push((n - 1, 0));
        edges.push((2 * n - 1, n));
    }
    Multigraph::from_edges(2 * n, &edges).unwrap()
}

/// A random loopless cubic multigraph on `n` (even) vertices from the
/// pairing model, optionally required to be simple and connected.
pub fn random_cubic<R: Rng>(rng: &mut R, n: usize, simple: bool) -> Multigraph {
    loop {
        let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
        points.shuffle(rng);
        let pairs: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
        if pairs.iter().any(|(a, b)| a == b) {
            continue;
        }
        let g = Multigraph::from_edges(n, &pairs).unwrap();
        if g.is_connected() && (!simple || g.is_simple()) {
            return g;
        }
    }
}

/// A random connected loopless multigraph with `m` edges on at most `n` vertices.
pub fn random_multigraph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 1..n.min(m + 1) {
        edges.push((rng.gen_range(0..i), i));
    }
    let used = edges.len() + 1;
    while edges.len() < m {
        let a = rng.gen_range(0..used);
        let b = rng.gen_range(0..used);
        if a != b {
            edges.push((a, b));
        }
    }
    for e in edges.iter_mut() {
        if rng.gen_bool(0.5) {
            *e = (e.1, e.0);
        }
    }
    Multigraph::from_edges(used, &edges).unwrap()
}

/// Loopless multigraphs with `m` edges and no isolated vertices, one per
/// isomorphism class.
pub fn shapes(m: usize) -> Vec<Multigraph> {
    let n = m + 1;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((from, chosen)) = stack.pop() {
        if chosen.len() == m {
            let used: BTreeSet<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
            if used.len() != *used.iter().max().unwrap_or(&0) + 1 && m > 0 {
                continue;
            }
            let canon = canonical(&chosen, used.len());
            if seen.insert(canon) {
                out.push(Multigraph::from_edges(used.len().max(1), &chosen).unwrap());
            }
            continue;
        }
        for p in from..pairs.len() {
            let mut next = chosen.clone();
            next.push(pairs[p]);
            stack.push((p, next));
        }
    }
    out
}

fn canonical(edges: &[(usize, usize)], n: usize) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut e: Vec<_> = edges
            .iter()
            .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
            .collect();
        e.sort();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}
