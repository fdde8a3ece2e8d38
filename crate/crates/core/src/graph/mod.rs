//! Tripartite graphs on parts `V_1, V_2, V_3`.
//!
//! Vertices are addressed by [`VertexRef`] with 1-based part and index, so
//! `VertexRef::new(2, 5)` is the fifth vertex of the second part. Adjacency
//! is kept as bit rows for every ordered pair of distinct parts; the rows of
//! `(p, q)` and `(q, p)` are transposes of each other and both are kept in
//! sync, so common-neighbourhood intersections are cheap from either side.
//!
//! A [`TripartiteGraph`] is an immutable value once built. Mutation goes
//! through [`GraphBuilder`] or the value-returning [`TripartiteGraph::with_edge`]
//! and [`TripartiteGraph::without_edge`].

mod io;
mod iso;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;

pub use io::{from_edge_list, from_json, parse_graph, to_edge_list, to_json, GraphFormat};
pub use iso::iso_equivalent;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("part sizes must be positive, got {0:?}")]
    ZeroPartSize([usize; 3]),
    #[error("part sizes must satisfy n1 >= n2 >= n3, got {0:?}")]
    Ordering([usize; 3]),
    #[error("vertex {0} is out of range for part sizes {1:?}")]
    VertexOutOfRange(VertexRef, [usize; 3]),
    #[error("{0} and {1} lie in the same part")]
    SamePart(VertexRef, VertexRef),
    #[error("edge {0} is already present")]
    DuplicateEdge(Edge),
    #[error("edge {0} is not present")]
    MissingEdge(Edge),
    #[error("part sizes differ: {0:?} vs {1:?}")]
    SizeMismatch([usize; 3], [usize; 3]),
    #[error("edge {0} is not an edge of the host")]
    NotSubgraph(Edge),
    /// Malformed serialized input; `position` is `line L, column C` for text
    /// errors or a JSON path such as `edges[3]`.
    #[error("{position}: {message}")]
    Parse { position: String, message: String },
}

/// Sizes `(n1, n2, n3)` of the three parts. All sizes are positive; the
/// ordering `n1 >= n2 >= n3` is only enforced by [`PartSizes::ordered`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct PartSizes([usize; 3]);

impl PartSizes {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self, GraphError> {
        let s = [n1, n2, n3];
        if s.contains(&0) {
            return Err(GraphError::ZeroPartSize(s));
        }
        Ok(PartSizes(s))
    }

    /// Sizes obeying `n1 >= n2 >= n3 >= 1`.
    pub fn ordered(n1: usize, n2: usize, n3: usize) -> Result<Self, GraphError> {
        let sizes = Self::new(n1, n2, n3)?;
        if !sizes.is_ordered() {
            return Err(GraphError::Ordering(sizes.0));
        }
        Ok(sizes)
    }

    pub fn balanced(n: usize) -> Result<Self, GraphError> {
        Self::new(n, n, n)
    }

    pub fn is_ordered(&self) -> bool {
        self.0[0] >= self.0[1] && self.0[1] >= self.0[2]
    }

    /// Size of part `part` (1-based).
    pub fn part(&self, part: usize) -> usize {
        self.0[part - 1]
    }

    pub fn as_array(&self) -> [usize; 3] {
        self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Edge count of the complete host `K_{n1,n2,n3}`.
    pub fn host_edge_count(&self) -> usize {
        let [a, b, c] = self.0;
        a * b + a * c + b * c
    }

    #[inline]
    pub(crate) fn get(&self, p: usize) -> usize {
        self.0[p]
    }
}

impl TryFrom<[usize; 3]> for PartSizes {
    type Error = GraphError;
    fn try_from(s: [usize; 3]) -> Result<Self, GraphError> {
        PartSizes::new(s[0], s[1], s[2])
    }
}

impl From<PartSizes> for [usize; 3] {
    fn from(s: PartSizes) -> Self {
        s.0
    }
}

impl fmt::Display for PartSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// The vertex `v_part^index`, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct VertexRef {
    pub part: usize,
    pub index: usize,
}

impl VertexRef {
    pub const fn new(part: usize, index: usize) -> Self {
        VertexRef { part, index }
    }

    #[inline]
    pub(crate) fn from_raw(p: usize, a: usize) -> Self {
        VertexRef {
            part: p + 1,
            index: a + 1,
        }
    }

    #[inline]
    pub(crate) fn raw(&self) -> (usize, usize) {
        (self.part - 1, self.index - 1)
    }

    pub fn is_valid(&self, sizes: PartSizes) -> bool {
        (1..=3).contains(&self.part) && self.index >= 1 && self.index <= sizes.part(self.part)
    }
}

impl From<[usize; 2]> for VertexRef {
    fn from(v: [usize; 2]) -> Self {
        VertexRef::new(v[0], v[1])
    }
}

impl From<VertexRef> for [usize; 2] {
    fn from(v: VertexRef) -> Self {
        [v.part, v.index]
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}^{}", self.part, self.index)
    }
}

/// A cross-part vertex pair, stored with the lower part first.
///
/// Ordering is the canonical edge order: part pair (1,2) before (1,3) before
/// (2,3), then lexicographic by the two indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct Edge {
    u: VertexRef,
    v: VertexRef,
}

impl Edge {
    /// Normalizes the endpoint order. Panics if both endpoints share a part;
    /// use [`Edge::try_new`] for unchecked input.
    pub fn new(a: VertexRef, b: VertexRef) -> Self {
        Self::try_new(a, b).expect("edge endpoints must lie in distinct parts")
    }

    pub fn try_new(a: VertexRef, b: VertexRef) -> Result<Self, GraphError> {
        match a.part.cmp(&b.part) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(GraphError::SamePart(a, b)),
        }
    }

    pub fn endpoints(&self) -> (VertexRef, VertexRef) {
        (self.u, self.v)
    }

    fn key(&self) -> (usize, usize, usize, usize) {
        (self.u.part, self.v.part, self.u.index, self.v.index)
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<[usize; 4]> for Edge {
    type Error = GraphError;
    fn try_from(e: [usize; 4]) -> Result<Self, GraphError> {
        Edge::try_new(VertexRef::new(e[0], e[1]), VertexRef::new(e[2], e[3]))
    }
}

impl From<Edge> for [usize; 4] {
    fn from(e: Edge) -> Self {
        [e.u.part, e.u.index, e.v.part, e.v.index]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.u, self.v)
    }
}

/// Shorthand for [`VertexRef::new`].
pub const fn v(part: usize, index: usize) -> VertexRef {
    VertexRef::new(part, index)
}

/// The three unordered part pairs in canonical order, 0-based.
pub(crate) const PART_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// A simple graph on three parts with edges only between distinct parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TripartiteGraph {
    sizes: PartSizes,
    words: [usize; 3],
    // adj[p][q] holds sizes[p] rows of words[q] u64s; adj[p][p] is empty.
    adj: [[Vec<u64>; 3]; 3],
    edges: usize,
}

impl TripartiteGraph {
    /// The edgeless graph on the given parts.
    pub fn empty(sizes: PartSizes) -> Self {
        let words = [0, 1, 2].map(|q| bits::words_for(sizes.get(q)));
        let adj = [0, 1, 2].map(|p| {
            [0, 1, 2].map(|q| {
                if p == q {
                    Vec::new()
                } else {
                    vec![0u64; sizes.get(p) * words[q]]
                }
            })
        });
        TripartiteGraph {
            sizes,
            words,
            adj,
            edges: 0,
        }
    }

    /// The complete tripartite graph on the given parts, without the
    /// ordering check of [`TripartiteGraph::new_host`].
    pub fn complete(sizes: PartSizes) -> Self {
        let mut g = Self::empty(sizes);
        for p in 0..3 {
            for q in 0..3 {
                if p == q {
                    continue;
                }
                let row = bits::full(sizes.get(q));
                for a in 0..sizes.get(p) {
                    g.row_mut(p, a, q).copy_from_slice(&row);
                }
            }
        }
        g.edges = sizes.host_edge_count();
        g
    }

    /// The host `K_{n1,n2,n3}`; requires `n1 >= n2 >= n3 >= 1`.
    pub fn new_host(n1: usize, n2: usize, n3: usize) -> Result<Self, GraphError> {
        Ok(Self::complete(PartSizes::ordered(n1, n2, n3)?))
    }

    pub fn from_edges<I>(sizes: PartSizes, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexRef, VertexRef)>,
    {
        let mut b = GraphBuilder::new(sizes);
        for (x, y) in edges {
            b.add_edge(x, y)?;
        }
        Ok(b.build())
    }

    pub fn sizes(&self) -> PartSizes {
        self.sizes
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, x: VertexRef, y: VertexRef) -> bool {
        if !x.is_valid(self.sizes) || !y.is_valid(self.sizes) || x.part == y.part {
            return false;
        }
        let (p, a) = x.raw();
        let (q, b) = y.raw();
        self.adjacent(p, a, q, b)
    }

    /// Number of edges between parts `p` and `q` (1-based, distinct).
    pub fn pair_edge_count(&self, p: usize, q: usize) -> usize {
        assert!(p != q, "parts must differ");
        bits::count(&self.adj[p - 1][q - 1])
    }

    /// Neighbours of `x` inside part `part`, in index order.
    pub fn neighbors_in(&self, x: VertexRef, part: usize) -> Vec<VertexRef> {
        let (p, a) = x.raw();
        let q = part - 1;
        if p == q {
            return Vec::new();
        }
        bits::ones(self.row(p, a, q))
            .map(|b| VertexRef::from_raw(q, b))
            .collect()
    }

    pub fn degree(&self, x: VertexRef) -> usize {
        let (p, a) = x.raw();
        (0..3)
            .filter(|&q| q != p)
            .map(|q| bits::count(self.row(p, a, q)))
            .sum()
    }

    /// All vertices, part by part, in index order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        (0..3).flat_map(move |p| (0..self.sizes.get(p)).map(move |a| VertexRef::from_raw(p, a)))
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        PART_PAIRS.iter().flat_map(move |&(p, q)| {
            (0..self.sizes.get(p)).flat_map(move |a| {
                bits::ones(self.row(p, a, q)).map(move |b| Edge {
                    u: VertexRef::from_raw(p, a),
                    v: VertexRef::from_raw(q, b),
                })
            })
        })
    }

    /// A copy with the edge `xy` added.
    pub fn with_edge(&self, x: VertexRef, y: VertexRef) -> Result<Self, GraphError> {
        let mut b = self.to_builder();
        b.add_edge(x, y)?;
        Ok(b.build())
    }

    /// A copy with the edge `xy` removed.
    pub fn without_edge(&self, x: VertexRef, y: VertexRef) -> Result<Self, GraphError> {
        let mut b = self.to_builder();
        b.remove_edge(x, y)?;
        Ok(b.build())
    }

    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder { g: self.clone() }
    }

    /// Whether every edge of `self` is an edge of `other` (same part sizes).
    pub fn is_subgraph_of(&self, other: &TripartiteGraph) -> bool {
        self.sizes == other.sizes
            && PART_PAIRS.iter().all(|&(p, q)| {
                self.adj[p][q]
                    .iter()
                    .zip(&other.adj[p][q])
                    .all(|(x, y)| x & !y == 0)
            })
    }

    // ---- raw 0-based access used by the search code ----

    #[inline]
    pub(crate) fn row(&self, p: usize, a: usize, q: usize) -> &[u64] {
        let w = self.words[q];
        &self.adj[p][q][a * w..(a + 1) * w]
    }

    #[inline]
    fn row_mut(&mut self, p: usize, a: usize, q: usize) -> &mut [u64] {
        let w = self.words[q];
        &mut self.adj[p][q][a * w..(a + 1) * w]
    }

    #[inline]
    pub(crate) fn adjacent(&self, p: usize, a: usize, q: usize, b: usize) -> bool {
        bits::test(self.row(p, a, q), b)
    }

    /// Sets or clears a single edge in place; returns whether anything changed.
    pub(crate) fn set_edge_raw(
        &mut self,
        p: usize,
        a: usize,
        q: usize,
        b: usize,
        on: bool,
    ) -> bool {
        debug_assert!(p != q);
        if self.adjacent(p, a, q, b) == on {
            return false;
        }
        if on {
            bits::set(self.row_mut(p, a, q), b);
            bits::set(self.row_mut(q, b, p), a);
            self.edges += 1;
        } else {
            bits::clear(self.row_mut(p, a, q), b);
            bits::clear(self.row_mut(q, b, p), a);
            self.edges -= 1;
        }
        true
    }

    fn check_pair(&self, x: VertexRef, y: VertexRef) -> Result<Edge, GraphError> {
        for z in [x, y] {
            if !z.is_valid(self.sizes) {
                return Err(GraphError::VertexOutOfRange(z, self.sizes.as_array()));
            }
        }
        Edge::try_new(x, y)
    }
}

impl fmt::Debug for TripartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TripartiteGraph")
            .field("sizes", &self.sizes.as_array())
            .field(
                "edges",
                &self.edges().map(<[usize; 4]>::from).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Single-owner mutable construction of a [`TripartiteGraph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    g: TripartiteGraph,
}

impl GraphBuilder {
    pub fn new(sizes: PartSizes) -> Self {
        GraphBuilder {
            g: TripartiteGraph::empty(sizes),
        }
    }

    pub fn sizes(&self) -> PartSizes {
        self.g.sizes
    }

    pub fn has_edge(&self, x: VertexRef, y: VertexRef) -> bool {
        self.g.has_edge(x, y)
    }

    pub fn edge_count(&self) -> usize {
        self.g.edges
    }

    pub fn add_edge(&mut self, x: VertexRef, y: VertexRef) -> Result<(), GraphError> {
        let e = self.g.check_pair(x, y)?;
        let (p, a) = x.raw();
        let (q, b) = y.raw();
        if !self.g.set_edge_raw(p, a, q, b, true) {
            return Err(GraphError::DuplicateEdge(e));
        }
        Ok(())
    }

    /// Adds `xy` unless it is already present; returns whether it was added.
    pub fn insert_edge(&mut self, x: VertexRef, y: VertexRef) -> Result<bool, GraphError> {
        self.g.check_pair(x, y)?;
        let (p, a) = x.raw();
        let (q, b) = y.raw();
        Ok(self.g.set_edge_raw(p, a, q, b, true))
    }

    pub fn remove_edge(&mut self, x: VertexRef, y: VertexRef) -> Result<(), GraphError> {
        let e = self.g.check_pair(x, y)?;
        let (p, a) = x.raw();
        let (q, b) = y.raw();
        if !self.g.set_edge_raw(p, a, q, b, false) {
            return Err(GraphError::MissingEdge(e));
        }
        Ok(())
    }

    pub fn build(self) -> TripartiteGraph {
        self.g
    }
}

/// Per-part minimum degrees together with every vertex's degree split by the
/// part its neighbours lie in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// `(δ1, δ2, δ3)`.
    pub min_degree: [usize; 3],
    /// `split[p][a][q]` = neighbours of `v_{p+1}^{a+1}` in part `q+1`;
    /// the own-part entry is always zero.
    #[serde(skip)]
    pub split: [Vec<[usize; 3]>; 3],
}

impl DegreeProfile {
    pub fn degree(&self, x: VertexRef) -> usize {
        self.split[x.part - 1][x.index - 1].iter().sum()
    }

    pub fn neighbors_in_part(&self, x: VertexRef, part: usize) -> usize {
        self.split[x.part - 1][x.index - 1][part - 1]
    }

    /// `δ(G)` over all vertices.
    pub fn min_overall(&self) -> usize {
        *self.min_degree.iter().min().unwrap()
    }

    /// A vertex of part `part` attaining `δ_part`, lowest index first.
    pub fn argmin(&self, part: usize) -> VertexRef {
        let p = part - 1;
        let a = self.split[p]
            .iter()
            .position(|d| d.iter().sum::<usize>() == self.min_degree[p])
            .unwrap();
        VertexRef::from_raw(p, a)
    }
}

pub fn degree_profile(g: &TripartiteGraph) -> DegreeProfile {
    let split = [0, 1, 2].map(|p| {
        (0..g.sizes.get(p))
            .map(|a| {
                let mut d = [0; 3];
                for (q, slot) in d.iter_mut().enumerate() {
                    if q != p {
                        *slot = bits::count(g.row(p, a, q));
                    }
                }
                d
            })
            .collect::<Vec<_>>()
    });
    let min_degree = [0, 1, 2].map(|p| {
        split[p]
            .iter()
            .map(|d| d.iter().sum::<usize>())
            .min()
            .unwrap_or(0)
    });
    DegreeProfile { min_degree, split }
}

/// Host edges missing from `g`, in canonical order.
pub fn nonedges(g: &TripartiteGraph, host: &TripartiteGraph) -> Result<Vec<Edge>, GraphError> {
    if g.sizes != host.sizes {
        return Err(GraphError::SizeMismatch(
            g.sizes.as_array(),
            host.sizes.as_array(),
        ));
    }
    if let Some(e) = g.edges().find(|e| !host.has_edge(e.u, e.v)) {
        return Err(GraphError::NotSubgraph(e));
    }
    Ok(host.edges().filter(|e| !g.has_edge(e.u, e.v)).collect())
}

/// Cross-part pairs absent from `g` when the host is complete on `g`'s parts.
pub fn host_nonedges(g: &TripartiteGraph) -> Vec<Edge> {
    let s = g.sizes;
    let mut out = Vec::with_capacity(s.host_edge_count() - g.edge_count());
    for &(p, q) in &PART_PAIRS {
        for a in 0..s.get(p) {
            for b in 0..s.get(q) {
                if !g.adjacent(p, a, q, b) {
                    out.push(Edge {
                        u: VertexRef::from_raw(p, a),
                        v: VertexRef::from_raw(q, b),
                    });
                }
            }
        }
    }
    out
}
