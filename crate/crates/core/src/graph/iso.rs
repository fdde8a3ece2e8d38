//! Part-respecting isomorphism: a permutation of equal-size parts composed
//! with relabelings inside each part.

use super::TripartiteGraph;
use crate::bits;

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Exact backtracking test; intended for parts of a dozen or so vertices.
pub fn iso_equivalent(g: &TripartiteGraph, h: &TripartiteGraph) -> bool {
    let mut gs = g.sizes().as_array();
    let mut hs = h.sizes().as_array();
    gs.sort_unstable();
    hs.sort_unstable();
    if gs != hs || g.edge_count() != h.edge_count() {
        return false;
    }
    PERMS
        .iter()
        .any(|perm| Matcher::new(g, h, *perm).is_some_and(|mut m| m.run()))
}

/// Split degree of `(p, a)` towards each part.
fn signature(g: &TripartiteGraph, p: usize, a: usize) -> [usize; 3] {
    let mut s = [0; 3];
    for (q, slot) in s.iter_mut().enumerate() {
        if q != p {
            *slot = bits::count(g.row(p, a, q));
        }
    }
    s
}

struct Matcher<'a> {
    g: &'a TripartiteGraph,
    h: &'a TripartiteGraph,
    perm: [usize; 3],
    order: Vec<(usize, usize)>,
    // candidates[k]: h-indices (in part perm[p]) whose signature matches order[k]
    candidates: Vec<Vec<usize>>,
    image: [Vec<usize>; 3],
    used: [Vec<bool>; 3],
}

impl<'a> Matcher<'a> {
    fn new(g: &'a TripartiteGraph, h: &'a TripartiteGraph, perm: [usize; 3]) -> Option<Self> {
        let gs = g.sizes();
        let hs = h.sizes();
        if (0..3).any(|p| gs.get(p) != hs.get(perm[p])) {
            return None;
        }
        for &(p, q) in &super::PART_PAIRS {
            if bits::count(&g.adj[p][q]) != bits::count(&h.adj[perm[p]][perm[q]]) {
                return None;
            }
        }
        let hsig: [Vec<[usize; 3]>; 3] =
            [0, 1, 2].map(|p| (0..hs.get(p)).map(|b| signature(h, p, b)).collect());

        let mut items = Vec::new();
        for p in 0..3 {
            for a in 0..gs.get(p) {
                let gsig = signature(g, p, a);
                let hp = perm[p];
                let cands: Vec<usize> = (0..hs.get(hp))
                    .filter(|&b| {
                        (0..3)
                            .filter(|&q| q != p)
                            .all(|q| hsig[hp][b][perm[q]] == gsig[q])
                    })
                    .collect();
                if cands.is_empty() {
                    return None;
                }
                items.push(((p, a), cands));
            }
        }
        // Most constrained vertices first.
        items.sort_by_key(|((p, a), c)| (c.len(), *p, *a));
        let (order, candidates) = items.into_iter().unzip();
        Some(Matcher {
            g,
            h,
            perm,
            order,
            candidates,
            image: [0, 1, 2].map(|p| vec![usize::MAX; gs.get(p)]),
            used: [0, 1, 2].map(|p| vec![false; hs.get(p)]),
        })
    }

    fn run(&mut self) -> bool {
        self.extend(0)
    }

    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let (p, a) = self.order[k];
        let hp = self.perm[p];
        for ci in 0..self.candidates[k].len() {
            let b = self.candidates[k][ci];
            if self.used[hp][b] || !self.consistent(k, p, a, b) {
                continue;
            }
            self.used[hp][b] = true;
            self.image[p][a] = b;
            if self.extend(k + 1) {
                return true;
            }
            self.used[hp][b] = false;
            self.image[p][a] = usize::MAX;
        }
        false
    }

    fn consistent(&self, k: usize, p: usize, a: usize, b: usize) -> bool {
        let hp = self.perm[p];
        self.order[..k].iter().all(|&(q, c)| {
            q == p || {
                let d = self.image[q][c];
                self.g.adjacent(p, a, q, c) == self.h.adjacent(hp, b, self.perm[q], d)
            }
        })
    }
}
