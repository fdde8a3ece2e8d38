#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;
use trisat::graph::v;
use trisat::{contains_naive, PartSizes, PatternSpec, TripartiteGraph, VertexRef};

pub fn pat(l: usize, m: usize, p: usize) -> PatternSpec {
    PatternSpec::new(l, m, p).unwrap()
}

pub fn sizes(n1: usize, n2: usize, n3: usize) -> PartSizes {
    PartSizes::new(n1, n2, n3).unwrap()
}

/// Every cross-part vertex pair, listed independently of the library.
pub fn cross_pairs(s: PartSizes) -> Vec<(VertexRef, VertexRef)> {
    let mut out = Vec::new();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        for a in 1..=s.part(i) {
            for b in 1..=s.part(j) {
                out.push((v(i, a), v(j, b)));
            }
        }
    }
    out
}

pub fn graph_from_mask(s: PartSizes, keep: &[bool]) -> TripartiteGraph {
    let pairs = cross_pairs(s);
    TripartiteGraph::from_edges(
        s,
        pairs
            .into_iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| e),
    )
    .unwrap()
}

/// Random graphs with every part of size `1..=max_part`.
pub fn graph_strategy(max_part: usize) -> impl Strategy<Value = TripartiteGraph> {
    (1..=max_part, 1..=max_part, 1..=max_part).prop_flat_map(|(a, b, c)| {
        let s = sizes(a, b, c);
        vec(any::<bool>(), s.host_edge_count()).prop_map(move |keep| graph_from_mask(s, &keep))
    })
}

/// Patterns with every class of size at most `max_class`, `p = 0` included.
pub fn pattern_strategy(max_class: usize) -> impl Strategy<Value = PatternSpec> {
    (1..=max_class, 1..=max_class, 0..=max_class).prop_filter_map("ordered classes", |(l, m, p)| {
        PatternSpec::new(l, m, p).ok()
    })
}

/// Saturation decided with the brute-force containment routine only.
pub fn naive_saturated(g: &TripartiteGraph, p: &PatternSpec) -> bool {
    if contains_naive(g, p).unwrap().is_some() {
        return false;
    }
    cross_pairs(g.sizes())
        .into_iter()
        .filter(|&(x, y)| !g.has_edge(x, y))
        .all(|(x, y)| {
            contains_naive(&g.with_edge(x, y).unwrap(), p)
                .unwrap()
                .is_some()
        })
}

/// Degree of `x` by scanning every possible neighbour.
pub fn naive_degree(g: &TripartiteGraph, x: VertexRef) -> usize {
    g.vertices()
        .filter(|&y| y.part != x.part && g.has_edge(x, y))
        .count()
}

/// Applies an independent vertex permutation inside each part;
/// `perm[p][a-1]` is the new index of `v_{p+1}^a`.
pub fn relabel_within(g: &TripartiteGraph, perm: &[Vec<usize>; 3]) -> TripartiteGraph {
    let m = |x: VertexRef| v(x.part, perm[x.part - 1][x.index - 1]);
    TripartiteGraph::from_edges(
        g.sizes(),
        g.edges().map(|e| {
            let (x, y) = e.endpoints();
            (m(x), m(y))
        }),
    )
    .unwrap()
}

/// Moves part `p` to part `target[p-1]`; the result has permuted sizes.
pub fn relabel_parts(g: &TripartiteGraph, target: [usize; 3]) -> TripartiteGraph {
    let mut s = [0; 3];
    for p in 1..=3 {
        s[target[p - 1] - 1] = g.sizes().part(p);
    }
    let m = |x: VertexRef| v(target[x.part - 1], x.index);
    TripartiteGraph::from_edges(
        sizes(s[0], s[1], s[2]),
        g.edges().map(|e| {
            let (x, y) = e.endpoints();
            (m(x), m(y))
        }),
    )
    .unwrap()
}

/// The subgraph induced by `keep[p]` (1-based indices, increasing) in each
/// part, reindexed from 1.
pub fn induced(g: &TripartiteGraph, keep: &[Vec<usize>; 3]) -> TripartiteGraph {
    let pos = |x: VertexRef| keep[x.part - 1].iter().position(|&a| a == x.index);
    let s = sizes(keep[0].len(), keep[1].len(), keep[2].len());
    TripartiteGraph::from_edges(
        s,
        g.edges().filter_map(|e| {
            let (x, y) = e.endpoints();
            Some((v(x.part, pos(x)? + 1), v(y.part, pos(y)? + 1)))
        }),
    )
    .unwrap()
}
