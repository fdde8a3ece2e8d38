//! Exact and heuristic saturation numbers on small hosts.
//!
//! A subgraph is `F`-saturated iff it is a maximal `F`-free subgraph of the
//! host, so the exact search walks host edges in canonical order deciding
//! include or exclude:
//!
//! * an edge is included only if the graph stays `F`-free;
//! * an excluded edge must still complete a copy of `F` in the final graph.
//!   The final graph lies between the included edges and the included plus
//!   undecided edges (the *upper* graph), so each excluded edge keeps a
//!   witness copy inside the upper graph. When an exclusion removes an edge
//!   from a stored witness, that witness is searched again, and the branch
//!   dies if none is left.
//!
//! Every leaf is therefore saturated, and every saturated graph is a leaf.
//!
//! The top of the tree is cut into tasks (in depth-first order) that run in
//! parallel. For minimisation the shared incumbent is the key
//! `value * tasks + task_index`, so ties go to the earliest task and the
//! reported witness is the first optimum in depth-first order whatever the
//! number of workers.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::containment::{embedding_through, Embedding, PatternSpec};
use crate::graph::{iso_equivalent, PartSizes, TripartiteGraph, VertexRef, PART_PAIRS};
use crate::verifier;

/// Default limit on host edges for the exact search.
pub const EXACT_EDGE_GUARD: usize = 40;
/// Limit on host edges for the exhaustive oracle.
pub const EXHAUSTIVE_EDGE_GUARD: usize = 16;
/// Hard limit imposed by the edge-mask width.
const MASK_BITS: usize = 128;
/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "TRISAT_THREADS";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("host has {edges} edges, above the limit of {limit}")]
    GuardExceeded { edges: usize, limit: usize },
    #[error("node budget of {budget} exhausted; best value found so far: {best_value:?}")]
    Inconclusive {
        budget: u64,
        best_value: Option<usize>,
        best: Option<Box<TripartiteGraph>>,
        nodes_explored: u64,
    },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Exhaustive,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub value: usize,
    pub witnesses: Vec<TripartiteGraph>,
    pub nodes_explored: u64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Trial that produced the greedy witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_trial: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop after this many search nodes and report the incumbent.
    pub node_budget: Option<u64>,
    pub edge_guard: usize,
    /// Worker count; `None` reads the environment, then uses all cores.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: None,
            edge_guard: EXACT_EDGE_GUARD,
            threads: None,
        }
    }
}

/// Worker count from an explicit request or the environment; `0` means
/// the machine default.
pub fn worker_count(threads: Option<usize>) -> usize {
    threads
        .or_else(|| std::env::var(THREADS_ENV).ok()?.trim().parse().ok())
        .unwrap_or(0)
}

fn in_pool<R: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> Result<R, SearchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(threads))
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Host edges in canonical order with an index lookup.
struct EdgeTable {
    sizes: PartSizes,
    edges: Vec<(usize, usize, usize, usize)>,
    base: [[usize; 3]; 3],
}

impl EdgeTable {
    fn new(sizes: PartSizes) -> Self {
        let mut edges = Vec::with_capacity(sizes.host_edge_count());
        let mut base = [[0; 3]; 3];
        for &(p, q) in &PART_PAIRS {
            base[p][q] = edges.len();
            base[q][p] = edges.len();
            for a in 0..sizes.get(p) {
                for b in 0..sizes.get(q) {
                    edges.push((p, a, q, b));
                }
            }
        }
        EdgeTable { sizes, edges, base }
    }

    fn index(&self, x: VertexRef, y: VertexRef) -> usize {
        let (mut p, mut a) = x.raw();
        let (mut q, mut b) = y.raw();
        if p > q {
            std::mem::swap(&mut p, &mut q);
            std::mem::swap(&mut a, &mut b);
        }
        self.base[p][q] + a * self.sizes.get(q) + b
    }

    /// Edges of a copy, except `skip`, as a bit mask.
    fn mask(&self, emb: &Embedding, skip: usize) -> u128 {
        let mut m = 0u128;
        for (i, ci) in emb.classes.iter().enumerate() {
            for cj in &emb.classes[i + 1..] {
                for &x in ci {
                    for &y in cj {
                        let k = self.index(x, y);
                        if k != skip {
                            m |= 1 << k;
                        }
                    }
                }
            }
        }
        m
    }

    fn endpoints(&self, i: usize) -> (VertexRef, VertexRef) {
        let (p, a, q, b) = self.edges[i];
        (VertexRef::from_raw(p, a), VertexRef::from_raw(q, b))
    }
}

#[derive(Clone)]
struct State {
    inc: TripartiteGraph,
    upper: TripartiteGraph,
    count: usize,
    /// Excluded edges with the mask of their current witness.
    excluded: Vec<(usize, u128)>,
    next: usize,
}

trait Visitor {
    fn prune(&self, count: usize) -> bool;
    fn leaf(&mut self, st: &State);
    /// Called instead of descending when `st.next == split`.
    fn split(&mut self, _st: &State) {}
}

struct Walker<'a> {
    table: &'a EdgeTable,
    pat: &'a PatternSpec,
    split: usize,
    nodes: &'a AtomicU64,
    budget: Option<u64>,
    abort: &'a AtomicBool,
}

impl Walker<'_> {
    fn walk(&self, st: &mut State, v: &mut impl Visitor) {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            self.abort.store(true, Ordering::Relaxed);
        }
        if self.abort.load(Ordering::Relaxed) || v.prune(st.count) {
            return;
        }
        let i = st.next;
        if i == self.table.edges.len() {
            v.leaf(st);
            return;
        }
        if i == self.split {
            v.split(st);
            return;
        }
        let (p, a, q, b) = self.table.edges[i];
        let (x, y) = self.table.endpoints(i);
        let closing = embedding_through(&st.inc, self.pat, x, y);
        st.next = i + 1;
        if closing.is_none() {
            st.inc.set_edge_raw(p, a, q, b, true);
            st.count += 1;
            self.walk(st, v);
            st.count -= 1;
            st.inc.set_edge_raw(p, a, q, b, false);
        }
        st.upper.set_edge_raw(p, a, q, b, false);
        let witness = closing.or_else(|| embedding_through(&st.upper, self.pat, x, y));
        if let Some(w) = witness {
            let saved = st.excluded.clone();
            if self.rewitness(st, i) {
                st.excluded.push((i, self.table.mask(&w, i)));
                self.walk(st, v);
            }
            st.excluded = saved;
        }
        st.upper.set_edge_raw(p, a, q, b, true);
        st.next = i;
    }

    /// Replaces every stored witness that used edge `gone`; false if some
    /// excluded edge no longer has one.
    fn rewitness(&self, st: &mut State, gone: usize) -> bool {
        for k in 0..st.excluded.len() {
            let (j, mask) = st.excluded[k];
            if mask >> gone & 1 == 0 {
                continue;
            }
            let (x, y) = self.table.endpoints(j);
            match embedding_through(&st.upper, self.pat, x, y) {
                Some(w) => st.excluded[k].1 = self.table.mask(&w, j),
                None => return false,
            }
        }
        true
    }
}

fn start_state(sizes: PartSizes) -> State {
    State {
        inc: TripartiteGraph::empty(sizes),
        upper: TripartiteGraph::complete(sizes),
        count: 0,
        excluded: Vec::new(),
        next: 0,
    }
}

/// Depth at which the tree is cut into parallel tasks.
fn split_depth(edges: usize) -> usize {
    edges.min(10)
}

struct Splitter {
    tasks: Vec<State>,
}

impl Visitor for Splitter {
    fn prune(&self, _: usize) -> bool {
        false
    }
    fn leaf(&mut self, st: &State) {
        self.tasks.push(st.clone());
    }
    fn split(&mut self, st: &State) {
        self.tasks.push(st.clone());
    }
}

struct Minimizer<'a> {
    key: &'a AtomicU64,
    tasks: u64,
    task: u64,
    best: Option<(usize, TripartiteGraph)>,
}

impl Visitor for Minimizer<'_> {
    fn prune(&self, count: usize) -> bool {
        count as u64 * self.tasks + self.task >= self.key.load(Ordering::Relaxed)
    }
    fn leaf(&mut self, st: &State) {
        let k = st.count as u64 * self.tasks + self.task;
        if k < self.key.fetch_min(k, Ordering::Relaxed) {
            self.best = Some((st.count, st.inc.clone()));
        }
    }
}

struct Collector<'a> {
    best: &'a AtomicUsize,
    found: Vec<TripartiteGraph>,
    value: usize,
}

impl Visitor for Collector<'_> {
    fn prune(&self, count: usize) -> bool {
        count > self.best.load(Ordering::Relaxed)
    }
    fn leaf(&mut self, st: &State) {
        let c = st.count;
        if c > self.best.fetch_min(c, Ordering::Relaxed) {
            return;
        }
        if c < self.value {
            self.value = c;
            self.found.clear();
        }
        if c == self.value && !self.found.iter().any(|h| iso_equivalent(h, &st.inc)) {
            self.found.push(st.inc.clone());
        }
    }
}

struct Prepared {
    table: EdgeTable,
    tasks: Vec<State>,
    nodes: AtomicU64,
    abort: AtomicBool,
    incumbent: (usize, TripartiteGraph),
}

fn prepare(
    sizes: PartSizes,
    pat: &PatternSpec,
    opts: &SearchOptions,
) -> Result<Prepared, SearchError> {
    let edges = sizes.host_edge_count();
    let limit = opts.edge_guard.min(MASK_BITS);
    if edges > limit {
        return Err(SearchError::GuardExceeded { edges, limit });
    }
    let table = EdgeTable::new(sizes);
    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let mut splitter = Splitter { tasks: Vec::new() };
    Walker {
        table: &table,
        pat,
        split: split_depth(edges),
        nodes: &nodes,
        budget: opts.node_budget,
        abort: &abort,
    }
    .walk(&mut start_state(sizes), &mut splitter);
    // A single greedy pass gives a starting incumbent; any saturated graph
    // bounds the optimum.
    let g = greedy_trial(&table, pat, 0, 0);
    let incumbent = (g.edge_count(), g);
    Ok(Prepared {
        tasks: splitter.tasks,
        table,
        nodes,
        abort,
        incumbent,
    })
}

/// Exact `sat(host, pat)` with the first optimal witness in depth-first
/// order.
pub fn sat_exact(
    sizes: PartSizes,
    pat: &PatternSpec,
    opts: SearchOptions,
) -> Result<SearchResult, SearchError> {
    let prep = prepare(sizes, pat, &opts)?;
    let t = prep.tasks.len().max(1) as u64;
    let (inc_value, inc_graph) = prep.incumbent.clone();
    let key = AtomicU64::new((inc_value as u64 + 1) * t);
    let bests: Vec<Option<(usize, TripartiteGraph)>> = in_pool(opts.threads, || {
        prep.tasks
            .par_iter()
            .enumerate()
            .map(|(i, task)| {
                let mut v = Minimizer {
                    key: &key,
                    tasks: t,
                    task: i as u64,
                    best: None,
                };
                walker(&prep, pat, opts.node_budget).walk(&mut task.clone(), &mut v);
                v.best
            })
            .collect()
    })?;
    let final_key = key.load(Ordering::Relaxed);
    let winner = bests
        .into_iter()
        .enumerate()
        .filter_map(|(i, b)| b.map(|(c, g)| (c as u64 * t + i as u64, c, g)))
        .find(|(k, _, _)| *k == final_key);
    let nodes = prep.nodes.load(Ordering::Relaxed);
    if prep.abort.load(Ordering::Relaxed) {
        let (bv, bg) = match winner {
            Some((_, c, g)) => (c, g),
            None => (inc_value, inc_graph),
        };
        return Err(SearchError::Inconclusive {
            budget: opts.node_budget.unwrap_or(0),
            best_value: Some(bv),
            best: Some(Box::new(bg)),
            nodes_explored: nodes,
        });
    }
    let (_, value, witness) = winner.expect("every saturated graph is a leaf of the search");
    Ok(SearchResult {
        value,
        witnesses: vec![witness],
        nodes_explored: nodes,
        method: Method::Exact,
        seed: None,
        trials: None,
        best_trial: None,
    })
}

fn walker<'a>(prep: &'a Prepared, pat: &'a PatternSpec, budget: Option<u64>) -> Walker<'a> {
    Walker {
        table: &prep.table,
        pat,
        split: usize::MAX,
        nodes: &prep.nodes,
        budget,
        abort: &prep.abort,
    }
}

/// All minimum saturated subgraphs, one per part-respecting isomorphism
/// class, in depth-first order of their first occurrence.
pub fn enumerate_optima(
    sizes: PartSizes,
    pat: &PatternSpec,
    opts: SearchOptions,
) -> Result<SearchResult, SearchError> {
    let prep = prepare(sizes, pat, &opts)?;
    let best = AtomicUsize::new(prep.incumbent.0);
    let found: Vec<(usize, Vec<TripartiteGraph>)> = in_pool(opts.threads, || {
        prep.tasks
            .par_iter()
            .map(|task| {
                let mut v = Collector {
                    best: &best,
                    found: Vec::new(),
                    value: usize::MAX,
                };
                walker(&prep, pat, opts.node_budget).walk(&mut task.clone(), &mut v);
                (v.value, v.found)
            })
            .collect()
    })?;
    let nodes = prep.nodes.load(Ordering::Relaxed);
    let value = best.load(Ordering::Relaxed);
    if prep.abort.load(Ordering::Relaxed) {
        return Err(SearchError::Inconclusive {
            budget: opts.node_budget.unwrap_or(0),
            best_value: Some(value),
            best: found
                .into_iter()
                .find(|(v, _)| *v == value)
                .and_then(|(_, mut gs)| gs.drain(..).next())
                .or(Some(prep.incumbent.1))
                .map(Box::new),
            nodes_explored: nodes,
        });
    }
    let mut witnesses: Vec<TripartiteGraph> = Vec::new();
    for g in found
        .into_iter()
        .filter(|(v, _)| *v == value)
        .flat_map(|(_, gs)| gs)
    {
        if !witnesses.iter().any(|h| iso_equivalent(h, &g)) {
            witnesses.push(g);
        }
    }
    Ok(SearchResult {
        value,
        witnesses,
        nodes_explored: nodes,
        method: Method::Exact,
        seed: None,
        trials: None,
        best_trial: None,
    })
}

/// Brute force over all `2^|E(host)|` subgraphs; returns every minimum
/// saturated subgraph, ordered by edge mask.
pub fn sat_exhaustive(sizes: PartSizes, pat: &PatternSpec) -> Result<SearchResult, SearchError> {
    sat_exhaustive_with(sizes, pat, None)
}

pub fn sat_exhaustive_with(
    sizes: PartSizes,
    pat: &PatternSpec,
    threads: Option<usize>,
) -> Result<SearchResult, SearchError> {
    let e = sizes.host_edge_count();
    if e > EXHAUSTIVE_EDGE_GUARD {
        return Err(SearchError::GuardExceeded {
            edges: e,
            limit: EXHAUSTIVE_EDGE_GUARD,
        });
    }
    let table = EdgeTable::new(sizes);
    let build = |mask: u32| {
        let mut g = TripartiteGraph::empty(sizes);
        for (i, &(p, a, q, b)) in table.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.set_edge_raw(p, a, q, b, true);
            }
        }
        g
    };
    let hits: Vec<(u32, u32)> = in_pool(threads, || {
        (0..1u32 << e)
            .into_par_iter()
            .filter(|&mask| verifier::saturated(&build(mask), pat))
            .map(|mask| (mask.count_ones(), mask))
            .collect()
    })?;
    let value = hits
        .iter()
        .map(|h| h.0)
        .min()
        .expect("a maximal free subgraph always exists");
    Ok(SearchResult {
        value: value as usize,
        witnesses: hits
            .iter()
            .filter(|h| h.0 == value)
            .map(|h| build(h.1))
            .collect(),
        nodes_explored: 1u64 << e,
        method: Method::Exhaustive,
        seed: None,
        trials: None,
        best_trial: None,
    })
}

const TRIAL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Generator for one greedy trial: xoshiro256** seeded through SplitMix64
/// with `seed + trial * 0x9E3779B97F4A7C15` (wrapping).
pub fn trial_rng(seed: u64, trial: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed.wrapping_add(trial.wrapping_mul(TRIAL_STRIDE)))
}

/// Fisher-Yates from the top, drawing `j` uniformly from `0..=i` as the
/// high word of `next_u64() * (i + 1)`.
pub fn shuffle<T>(items: &mut [T], rng: &mut impl RngCore) {
    for i in (1..items.len()).rev() {
        let j = ((rng.next_u64() as u128 * (i as u128 + 1)) >> 64) as usize;
        items.swap(i, j);
    }
}

fn greedy_trial(table: &EdgeTable, pat: &PatternSpec, seed: u64, trial: u64) -> TripartiteGraph {
    let mut order: Vec<usize> = (0..table.edges.len()).collect();
    shuffle(&mut order, &mut trial_rng(seed, trial));
    let mut g = TripartiteGraph::empty(table.sizes);
    for i in order {
        let (x, y) = table.endpoints(i);
        if embedding_through(&g, pat, x, y).is_none() {
            let (p, a, q, b) = table.edges[i];
            g.set_edge_raw(p, a, q, b, true);
        }
    }
    g
}

/// Best of `trials` random maximal `F`-free subgraphs. Ties go to the
/// lowest trial index.
pub fn sat_greedy(
    sizes: PartSizes,
    pat: &PatternSpec,
    trials: usize,
    seed: u64,
) -> Result<SearchResult, SearchError> {
    sat_greedy_with(sizes, pat, trials, seed, None)
}

pub fn sat_greedy_with(
    sizes: PartSizes,
    pat: &PatternSpec,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SearchResult, SearchError> {
    if trials == 0 {
        return Err(SearchError::NoTrials);
    }
    let table = EdgeTable::new(sizes);
    let (count, trial, g) = in_pool(threads, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let g = greedy_trial(&table, pat, seed, t as u64);
                assert!(
                    verifier::saturated(&g, pat),
                    "greedy trial {t} produced a graph that is not {pat}-saturated"
                );
                (g.edge_count(), t, g)
            })
            .min_by_key(|(c, t, _)| (*c, *t))
            .expect("at least one trial")
    })?;
    Ok(SearchResult {
        value: count,
        witnesses: vec![g],
        nodes_explored: trials as u64,
        method: Method::Greedy,
        seed: Some(seed),
        trials: Some(trials),
        best_trial: Some(trial),
    })
}
