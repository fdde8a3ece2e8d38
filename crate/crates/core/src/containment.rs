//! Subgraph containment of complete tripartite patterns `K_{ℓ,m,p}`.
//!
//! When all three classes are nonempty, every embedding puts each class
//! inside a single part and the three classes in three distinct parts.
//! Vertices of different classes must be adjacent, hence lie in different
//! parts. Suppose class `A` meets two parts `P` and `Q`. Every vertex of `B`
//! and of `C` must avoid both `P` and `Q`, so `B ∪ C` sits inside the third
//! part, but `B` and `C` are nonempty and must be joined by edges. So no
//! class splits, and the search only tries class-to-part bijections.
//!
//! With `p = 0` the pattern is the complete bipartite graph `K_{ℓ,m}`. A
//! class may then spread over two parts, subject only to no part holding
//! vertices of both classes. The search enumerates the six ways of labelling
//! the parts by class and runs a biclique search on each.
//!
//! [`contains_naive`] ignores all of this and tries every choice of
//! disjoint vertex sets. It is the reference the fast routines are tested
//! against.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{self, Bits};
use crate::graph::{Edge, TripartiteGraph, VertexRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainmentError {
    #[error("invalid pattern K_{{{0},{1},{2}}}: need l >= m >= p >= 0 and m >= 1")]
    InvalidPattern(usize, usize, usize),
    #[error("cannot parse pattern `{0}`: expected L,M,P")]
    PatternSyntax(String),
    #[error("{0} is already an edge")]
    AlreadyEdge(Edge),
    #[error("{0} and {1} lie in the same part")]
    SamePart(VertexRef, VertexRef),
    #[error("vertex {0} is out of range")]
    OutOfRange(VertexRef),
    #[error("naive search limited to {limit} vertices, graph has {actual}")]
    GuardExceeded { limit: usize, actual: usize },
}

/// The complete tripartite pattern `K_{ℓ,m,p}` with `ℓ >= m >= p >= 0` and
/// `m >= 1`; `p = 0` gives the complete bipartite graph `K_{ℓ,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct PatternSpec {
    l: usize,
    m: usize,
    p: usize,
}

impl PatternSpec {
    pub fn new(l: usize, m: usize, p: usize) -> Result<Self, ContainmentError> {
        if !(l >= m && m >= p && m >= 1) {
            return Err(ContainmentError::InvalidPattern(l, m, p));
        }
        Ok(PatternSpec { l, m, p })
    }

    /// `C4 = K_{2,2}`.
    pub fn c4() -> Self {
        PatternSpec { l: 2, m: 2, p: 0 }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn class_sizes(&self) -> [usize; 3] {
        [self.l, self.m, self.p]
    }

    pub fn is_bipartite(&self) -> bool {
        self.p == 0
    }

    pub fn vertex_count(&self) -> usize {
        self.l + self.m + self.p
    }
}

impl TryFrom<[usize; 3]> for PatternSpec {
    type Error = ContainmentError;
    fn try_from(c: [usize; 3]) -> Result<Self, ContainmentError> {
        PatternSpec::new(c[0], c[1], c[2])
    }
}

impl From<PatternSpec> for [usize; 3] {
    fn from(p: PatternSpec) -> Self {
        p.class_sizes()
    }
}

impl FromStr for PatternSpec {
    type Err = ContainmentError;
    fn from_str(s: &str) -> Result<Self, ContainmentError> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| ContainmentError::PatternSyntax(s.into()))?;
        match parts.as_slice() {
            [l, m, p] => PatternSpec::new(*l, *m, *p),
            _ => Err(ContainmentError::PatternSyntax(s.into())),
        }
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "K_{{{},{}}}", self.l, self.m)
        } else {
            write!(f, "K_{{{},{},{}}}", self.l, self.m, self.p)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("expected {expected} classes, found {found}")]
    ClassCount { expected: usize, found: usize },
    #[error("class {class} has {found} vertices, expected {expected}")]
    ClassSize {
        class: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {0} is used twice")]
    Overlap(VertexRef),
    #[error("vertex {0} is out of range")]
    OutOfRange(VertexRef),
    #[error("{0} and {1} are in different classes but not adjacent")]
    MissingEdge(VertexRef, VertexRef),
    #[error("class {0} is not contained in a single part")]
    SplitClass(usize),
    #[error("two classes share part {0}")]
    SharedPart(usize),
}

/// Vertex sets for the nonempty pattern classes, in pattern order
/// (the `ℓ`-class first). Each set is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub classes: Vec<Vec<VertexRef>>,
}

impl Embedding {
    /// Checks the embedding invariants against `g` and `pat`, including
    /// class-to-part rigidity when all three classes are nonempty.
    pub fn check(&self, g: &TripartiteGraph, pat: &PatternSpec) -> Result<(), EmbeddingError> {
        let sizes: Vec<usize> = pat.class_sizes().into_iter().filter(|&s| s > 0).collect();
        if self.classes.len() != sizes.len() {
            return Err(EmbeddingError::ClassCount {
                expected: sizes.len(),
                found: self.classes.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for (k, (class, &want)) in self.classes.iter().zip(&sizes).enumerate() {
            if class.len() != want {
                return Err(EmbeddingError::ClassSize {
                    class: k,
                    expected: want,
                    found: class.len(),
                });
            }
            for &x in class {
                if !x.is_valid(g.sizes()) {
                    return Err(EmbeddingError::OutOfRange(x));
                }
                if !seen.insert(x) {
                    return Err(EmbeddingError::Overlap(x));
                }
            }
        }
        for (i, ci) in self.classes.iter().enumerate() {
            for cj in &self.classes[i + 1..] {
                for &x in ci {
                    for &y in cj {
                        if !g.has_edge(x, y) {
                            return Err(EmbeddingError::MissingEdge(x, y));
                        }
                    }
                }
            }
        }
        if self.classes.len() == 3 {
            let mut used = [false; 3];
            for (k, class) in self.classes.iter().enumerate() {
                let part = class[0].part;
                if class.iter().any(|x| x.part != part) {
                    return Err(EmbeddingError::SplitClass(k));
                }
                if std::mem::replace(&mut used[part - 1], true) {
                    return Err(EmbeddingError::SharedPart(part));
                }
            }
        }
        Ok(())
    }

    pub fn contains_vertex(&self, x: VertexRef) -> bool {
        self.classes.iter().any(|c| c.contains(&x))
    }

    /// Whether the embedding uses the edge `xy`, i.e. puts `x` and `y` in
    /// different classes.
    pub fn uses_edge(&self, x: VertexRef, y: VertexRef) -> bool {
        let cx = self.classes.iter().position(|c| c.contains(&x));
        let cy = self.classes.iter().position(|c| c.contains(&y));
        matches!((cx, cy), (Some(a), Some(b)) if a != b)
    }
}

/// Permutations of the three classes, lexicographic.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// A copy of `pat` inside `g`, if any. Deterministic: class-to-part
/// assignments are tried in lexicographic order and vertices in index order.
pub fn contains(g: &TripartiteGraph, pat: &PatternSpec) -> Option<Embedding> {
    search(g, pat, None)
}

/// A copy of `pat` in `g + uv`, where `uv` is a cross-part nonedge of `g`.
///
/// Only copies through the new edge are searched, which is complete only
/// when `g` itself is pattern-free; debug builds assert that.
pub fn contains_after(
    g: &TripartiteGraph,
    pat: &PatternSpec,
    u: VertexRef,
    v: VertexRef,
) -> Result<Option<Embedding>, ContainmentError> {
    for x in [u, v] {
        if !x.is_valid(g.sizes()) {
            return Err(ContainmentError::OutOfRange(x));
        }
    }
    if u.part == v.part {
        return Err(ContainmentError::SamePart(u, v));
    }
    if g.has_edge(u, v) {
        return Err(ContainmentError::AlreadyEdge(Edge::new(u, v)));
    }
    debug_assert!(
        contains(g, pat).is_none(),
        "contains_after requires a {pat}-free graph"
    );
    Ok(embedding_through(g, pat, u, v))
}

/// Copies of `pat` in `g + uv` that use the edge `uv`. No precondition on
/// `g` beyond `u` and `v` lying in distinct parts.
pub fn embedding_through(
    g: &TripartiteGraph,
    pat: &PatternSpec,
    u: VertexRef,
    v: VertexRef,
) -> Option<Embedding> {
    let (p, a) = u.raw();
    let (q, b) = v.raw();
    assert!(p != q, "endpoints must lie in distinct parts");
    search(g, pat, Some(((p, a), (q, b))))
}

type Forced = Option<((usize, usize), (usize, usize))>;

fn search(g: &TripartiteGraph, pat: &PatternSpec, forced: Forced) -> Option<Embedding> {
    if pat.is_bipartite() {
        bipartite(g, pat, forced)
    } else {
        tripartite(g, pat, forced)
    }
}

fn tripartite(g: &TripartiteGraph, pat: &PatternSpec, forced: Forced) -> Option<Embedding> {
    let class = pat.class_sizes();
    let sizes = g.sizes();
    let mut tried: Vec<[usize; 3]> = Vec::with_capacity(6);
    for perm in PERMS {
        // perm[c] is the part that hosts class c.
        let mut need = [0; 3];
        for c in 0..3 {
            need[perm[c]] = class[c];
        }
        if tried.contains(&need) {
            continue;
        }
        tried.push(need);
        if (0..3).any(|q| need[q] > sizes.get(q)) {
            continue;
        }
        if let Some(chosen) = TriSearch::run(g, need, forced) {
            let classes = (0..3)
                .map(|c| {
                    chosen[perm[c]]
                        .iter()
                        .map(|&a| VertexRef::from_raw(perm[c], a))
                        .collect()
                })
                .collect();
            return Some(Embedding { classes });
        }
    }
    None
}

struct TriSearch<'a> {
    g: &'a TripartiteGraph,
    order: [usize; 3],
    need: [usize; 3],
    chosen: [Vec<usize>; 3],
}

impl<'a> TriSearch<'a> {
    fn run(g: &'a TripartiteGraph, need: [usize; 3], forced: Forced) -> Option<[Vec<usize>; 3]> {
        let sizes = g.sizes();
        let mut cand: [Bits; 3] = [0, 1, 2].map(|q| bits::full(sizes.get(q)));
        let mut s = TriSearch {
            g,
            order: [0, 1, 2],
            need,
            chosen: [Vec::new(), Vec::new(), Vec::new()],
        };
        if let Some((x, y)) = forced {
            for (p, a) in [x, y] {
                s.chosen[p].push(a);
                bits::clear(&mut cand[p], a);
            }
            for (p, a) in [x, y] {
                for (q, c) in cand.iter_mut().enumerate() {
                    if q != p {
                        bits::and_assign(c, g.row(p, a, q));
                    }
                }
            }
            if (0..3).any(|q| s.chosen[q].len() > need[q]) {
                return None;
            }
        }
        // Parts with the fewest remaining picks first, ties by index.
        s.order.sort_by_key(|&q| (need[q] - s.chosen[q].len(), q));
        if s.step(0, 0, cand) {
            for c in &mut s.chosen {
                c.sort_unstable();
            }
            Some(s.chosen)
        } else {
            None
        }
    }

    /// Fills part `order[k]` starting at vertex index `from`.
    fn step(&mut self, k: usize, from: usize, cand: [Bits; 3]) -> bool {
        if k == 3 {
            return true;
        }
        let q = self.order[k];
        let missing = self.need[q] - self.chosen[q].len();
        if missing == 0 {
            return self.step(k + 1, 0, cand);
        }
        for &r in &self.order[k + 1..] {
            if bits::count(&cand[r]) < self.need[r] - self.chosen[r].len() {
                return false;
            }
        }
        let mut next = from;
        while let Some(a) = bits::next_one(&cand[q], next) {
            if bits::count_from(&cand[q], a) < missing {
                return false;
            }
            let mut sub = cand.clone();
            for (r, c) in sub.iter_mut().enumerate() {
                if r != q {
                    bits::and_assign(c, self.g.row(q, a, r));
                }
            }
            self.chosen[q].push(a);
            let done = if missing == 1 {
                self.step(k + 1, 0, sub)
            } else {
                self.step(k, a + 1, sub)
            };
            if done {
                return true;
            }
            self.chosen[q].pop();
            next = a + 1;
        }
        false
    }
}

/// Part labellings for `K_{ℓ,m}`: `true` puts the part on the `ℓ` side.
/// Parts may be left unused by an embedding, so only labellings that use
/// both sides are needed.
const SHAPES: [[bool; 3]; 6] = [
    [false, false, true],
    [false, true, false],
    [false, true, true],
    [true, false, false],
    [true, false, true],
    [true, true, false],
];

fn bipartite(g: &TripartiteGraph, pat: &PatternSpec, forced: Forced) -> Option<Embedding> {
    let (l, m) = (pat.l(), pat.m());
    let sizes = g.sizes();
    for shape in SHAPES {
        if l == m && !shape[0] {
            // Mirror image of a shape with part 1 on the `ℓ` side.
            continue;
        }
        let pool = |side: bool| (0..3).filter(|&q| shape[q] == side).collect::<Vec<_>>();
        let (lparts, mparts) = (pool(true), pool(false));
        let room = |parts: &[usize]| parts.iter().map(|&q| sizes.get(q)).sum::<usize>();
        if room(&lparts) < l || room(&mparts) < m {
            continue;
        }
        let roles: Vec<(Side, Side)> = match forced {
            None => vec![(vec![], vec![])],
            // The new edge must join the two sides.
            Some((x, y)) => [(x, y), (y, x)]
                .into_iter()
                .filter(|(a, b)| shape[a.0] && !shape[b.0])
                .map(|(a, b)| (vec![a], vec![b]))
                .collect(),
        };
        for (fl, fm) in roles {
            if let Some((ls, ms)) = biclique(g, &lparts, l, &fl, &mparts, m, &fm) {
                let to_refs = |v: Vec<(usize, usize)>| {
                    v.into_iter()
                        .map(|(q, a)| VertexRef::from_raw(q, a))
                        .collect()
                };
                return Some(Embedding {
                    classes: vec![to_refs(ls), to_refs(ms)],
                });
            }
        }
    }
    None
}

/// Raw `(part, index)` vertices on one side of a biclique.
type Side = Vec<(usize, usize)>;

/// Complete bipartite subgraph with `l_need` vertices from `lparts` and
/// `m_need` from `mparts`. The smaller side is enumerated; the other side is
/// read off the common neighbourhood at the end.
fn biclique(
    g: &TripartiteGraph,
    lparts: &[usize],
    l_need: usize,
    l_forced: &[(usize, usize)],
    mparts: &[usize],
    m_need: usize,
    m_forced: &[(usize, usize)],
) -> Option<(Side, Side)> {
    let flip = m_need < l_need;
    let (ep, en, ef, op, on, of) = if flip {
        (mparts, m_need, m_forced, lparts, l_need, l_forced)
    } else {
        (lparts, l_need, l_forced, mparts, m_need, m_forced)
    };
    let sizes = g.sizes();
    let init = |parts: &[usize], own: &[(usize, usize)], other: &[(usize, usize)]| {
        let mut c: [Bits; 3] = Default::default();
        for &q in parts {
            c[q] = bits::full(sizes.get(q));
        }
        for &(q, a) in own {
            bits::clear(&mut c[q], a);
        }
        for &(q, a) in other {
            for &r in parts {
                bits::and_assign(&mut c[r], g.row(q, a, r));
            }
        }
        c
    };
    let ecand = init(ep, ef, of);
    let ocand = init(op, of, ef);
    let mut st = Biclique {
        g,
        eparts: ep,
        oparts: op,
        chosen: ef.to_vec(),
        e_need: en,
        o_need: on - of.len(),
    };
    let found = st.step(0, 0, ecand, ocand)?;
    let mut enumerated = st.chosen;
    enumerated.sort_unstable();
    let mut other: Vec<(usize, usize)> = of.to_vec();
    other.extend(found);
    other.sort_unstable();
    Some(if flip {
        (other, enumerated)
    } else {
        (enumerated, other)
    })
}

struct Biclique<'a> {
    g: &'a TripartiteGraph,
    eparts: &'a [usize],
    oparts: &'a [usize],
    chosen: Vec<(usize, usize)>,
    e_need: usize,
    o_need: usize,
}

impl Biclique<'_> {
    /// Picks enumerated-side vertices in `(part, index)` order starting at
    /// `eparts[pi]`, index `from`; returns the completing other-side set.
    fn step(
        &mut self,
        pi: usize,
        from: usize,
        ecand: [Bits; 3],
        ocand: [Bits; 3],
    ) -> Option<Vec<(usize, usize)>> {
        let available: usize = self.oparts.iter().map(|&r| bits::count(&ocand[r])).sum();
        if available < self.o_need {
            return None;
        }
        if self.chosen.len() == self.e_need {
            let mut out = Vec::with_capacity(self.o_need);
            for &r in self.oparts {
                for b in bits::ones(&ocand[r]) {
                    if out.len() == self.o_need {
                        return Some(out);
                    }
                    out.push((r, b));
                }
            }
            return (out.len() == self.o_need).then_some(out);
        }
        let missing = self.e_need - self.chosen.len();
        let remaining = |pi: usize, from: usize| -> usize {
            self.eparts[pi..]
                .iter()
                .enumerate()
                .map(|(k, &q)| bits::count_from(&ecand[q], if k == 0 { from } else { 0 }))
                .sum()
        };
        let mut pi = pi;
        let mut from = from;
        while pi < self.eparts.len() {
            let q = self.eparts[pi];
            let Some(a) = bits::next_one(&ecand[q], from) else {
                pi += 1;
                from = 0;
                continue;
            };
            if remaining(pi, a) < missing {
                return None;
            }
            let row_ok = |r: usize| bits::and_count(&ocand[r], self.g.row(q, a, r));
            let reach: usize = self.oparts.iter().map(|&r| row_ok(r)).sum();
            if reach >= self.o_need {
                let mut sub = ocand.clone();
                for &r in self.oparts {
                    bits::and_assign(&mut sub[r], self.g.row(q, a, r));
                }
                self.chosen.push((q, a));
                if let Some(found) = self.step(pi, a + 1, ecand.clone(), sub) {
                    return Some(found);
                }
                self.chosen.pop();
            }
            from = a + 1;
        }
        None
    }
}

/// Largest graph [`contains_naive`] accepts.
pub const NAIVE_VERTEX_LIMIT: usize = 15;

/// Brute-force containment: tries every sequence of disjoint vertex sets of
/// the class sizes, anywhere in the graph, and keeps the first complete one.
pub fn contains_naive(
    g: &TripartiteGraph,
    pat: &PatternSpec,
) -> Result<Option<Embedding>, ContainmentError> {
    let verts: Vec<VertexRef> = g.vertices().collect();
    if verts.len() > NAIVE_VERTEX_LIMIT {
        return Err(ContainmentError::GuardExceeded {
            limit: NAIVE_VERTEX_LIMIT,
            actual: verts.len(),
        });
    }
    let n = verts.len();
    let adj: Vec<Vec<bool>> = verts
        .iter()
        .map(|&x| verts.iter().map(|&y| g.has_edge(x, y)).collect())
        .collect();
    let sizes: Vec<usize> = pat.class_sizes().into_iter().filter(|&s| s > 0).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; n];
    if naive_fill(&adj, &sizes, &mut classes, &mut used) {
        Ok(Some(Embedding {
            classes: classes
                .into_iter()
                .map(|c| c.into_iter().map(|i| verts[i]).collect())
                .collect(),
        }))
    } else {
        Ok(None)
    }
}

fn naive_fill(
    adj: &[Vec<bool>],
    sizes: &[usize],
    classes: &mut Vec<Vec<usize>>,
    used: &mut [bool],
) -> bool {
    if classes.len() == sizes.len() {
        return true;
    }
    let want = sizes[classes.len()];
    let n = adj.len();
    let mut combo = Vec::with_capacity(want);
    #[allow(clippy::too_many_arguments)]
    fn choose(
        start: usize,
        want: usize,
        n: usize,
        combo: &mut Vec<usize>,
        adj: &[Vec<bool>],
        sizes: &[usize],
        classes: &mut Vec<Vec<usize>>,
        used: &mut [bool],
    ) -> bool {
        if combo.len() == want {
            let complete = classes
                .iter()
                .flatten()
                .all(|&x| combo.iter().all(|&y| adj[x][y]));
            if !complete {
                return false;
            }
            for &x in combo.iter() {
                used[x] = true;
            }
            classes.push(combo.clone());
            if naive_fill(adj, sizes, classes, used) {
                return true;
            }
            classes.pop();
            for &x in combo.iter() {
                used[x] = false;
            }
            return false;
        }
        for x in start..n {
            if used[x] {
                continue;
            }
            combo.push(x);
            if choose(x + 1, want, n, combo, adj, sizes, classes, used) {
                return true;
            }
            combo.pop();
        }
        false
    }
    choose(0, want, n, &mut combo, adj, sizes, classes, used)
}
