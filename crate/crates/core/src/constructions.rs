//! Explicit saturated subgraphs of complete tripartite hosts.
//!
//! Vertex `v_i^a` is part `i`, index `a`, both 1-based. Every generator
//! joins a small hub set `S_i` in each part to both other parts and fills
//! the rest with bounded-degree circulants. A circulant joins the `a`-th
//! vertex of one class to a contiguous cyclic window of positions in
//! another, reduced by `ρ(x) = ((x-1) mod N) + 1`.
//!
//! | kind | pattern | hubs | extra |
//! |------|---------|------|-------|
//! | `C1` | `K_{ℓ,m,m}` | top `m` indices | three hub-hub edges removed |
//! | `C2` | `K_{ℓ,m,m}` | top `m` indices | a path of three hub edges removed |
//! | `C3` | `K_{ℓ,m,p}` | bottom `m-1` | residual circulants |
//! | `C4` | `K_{ℓ,m,m}`, balanced | bottom `m`, tier `t` above | tier sets joined cyclically |
//! | `C5` | `K_{ℓ,m,p}`, balanced | bottom `m-1`, tier `t` above | regular residual circulants |
//! | `C4Cycle` | `C4` | none | three stars |
//!
//! Here `t = ⌊(ℓ-m)/2⌋`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::containment::PatternSpec;
use crate::formulas::{self, BoundRecord, FormulaError};
use crate::graph::{GraphBuilder, PartSizes, TripartiteGraph, VertexRef};
use crate::verifier::residual_structure_check;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters for {which}: {reason}")]
    Invalid { which: Construction, reason: String },
    #[error("cannot build {which}: {reason}")]
    Infeasible { which: Construction, reason: String },
    #[error("residual check failed for {which}: {reason}")]
    ResidualCheck { which: Construction, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    C1,
    /// Variant `i ∈ {1,2,3}` of the path-removal construction.
    C2(usize),
    C3,
    C4,
    C5,
    C4Cycle,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::C1 => write!(f, "1"),
            Construction::C2(i) => write!(f, "2.{i}"),
            Construction::C3 => write!(f, "3"),
            Construction::C4 => write!(f, "4"),
            Construction::C5 => write!(f, "5"),
            Construction::C4Cycle => write!(f, "c4"),
        }
    }
}

impl FromStr for Construction {
    type Err = String;
    /// Accepts `1`..`5` and `c4`; `2` means variant 1, `2.i` picks variant `i`.
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "1" => Construction::C1,
            "2" => Construction::C2(1),
            "3" => Construction::C3,
            "4" => Construction::C4,
            "5" => Construction::C5,
            "c4" | "C4" => Construction::C4Cycle,
            other => match other.strip_prefix("2.").map(str::parse) {
                Some(Ok(i)) => Construction::C2(i),
                _ => return Err(format!("unknown construction `{s}`")),
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub which: Construction,
    pub l: usize,
    pub m: usize,
    pub p: usize,
    pub sizes: [usize; 3],
}

fn t_of(l: usize, m: usize) -> usize {
    (l - m) / 2
}

/// `ρ` for a window position `x >= 1` over `[1, n]`.
fn rho(x: usize, n: usize) -> usize {
    (x - 1) % n + 1
}

impl ConstructionParams {
    /// Parameters with the pattern implied by the construction: `p = m` for
    /// the `K_{ℓ,m,m}` constructions and `(2,2,0)` for `C4Cycle`.
    pub fn new(which: Construction, l: usize, m: usize, p: usize, sizes: [usize; 3]) -> Self {
        ConstructionParams {
            which,
            l,
            m,
            p,
            sizes,
        }
    }

    pub fn pattern(&self) -> Result<PatternSpec, ConstructionError> {
        let (l, m, p) = match self.which {
            Construction::C4Cycle => (2, 2, 0),
            _ => (self.l, self.m, self.p),
        };
        PatternSpec::new(l, m, p).map_err(|e| self.invalid(e.to_string()))
    }

    fn invalid(&self, reason: impl Into<String>) -> ConstructionError {
        ConstructionError::Invalid {
            which: self.which,
            reason: reason.into(),
        }
    }

    fn infeasible(&self, reason: impl Into<String>) -> ConstructionError {
        ConstructionError::Infeasible {
            which: self.which,
            reason: reason.into(),
        }
    }

    fn balanced_n(&self) -> Result<usize, ConstructionError> {
        let [n1, n2, n3] = self.sizes;
        if n1 == n2 && n2 == n3 {
            Ok(n1)
        } else {
            Err(self.invalid("host must be balanced"))
        }
    }

    /// Checks every condition under which the construction is guaranteed
    /// to be saturated.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let (l, m, p) = (self.l, self.m, self.p);
        let [n1, n2, n3] = self.sizes;
        let need = |ok: bool, why: String| if ok { Ok(()) } else { Err(self.invalid(why)) };
        need(
            n1 >= n2 && n2 >= n3 && n3 >= 1,
            format!("need n1 >= n2 >= n3 >= 1, got {:?}", self.sizes),
        )?;
        match self.which {
            Construction::C1 | Construction::C2(_) => {
                need(l >= m && m >= 1, "need l >= m >= 1".into())?;
                need(p == m, "pattern must be K_{l,m,m}".into())?;
                let bound = (l + 2).max((3 * l).saturating_sub(2 * m + 1));
                need(
                    n3 >= bound,
                    format!("need n3 >= max(l+2, 3l-2m-1) = {bound}"),
                )?;
                if let Construction::C2(i) = self.which {
                    need((1..=3).contains(&i), format!("variant {i} not in 1..=3"))?;
                    need(m >= 2, "path removal needs m >= 2".into())?;
                }
            }
            Construction::C3 => {
                need(l >= m && m > p && p >= 1, "need l >= m > p >= 1".into())?;
                need(n3 >= l, format!("need n3 >= l = {l}"))?;
            }
            Construction::C4 => {
                need(l >= m && m >= 1, "need l >= m >= 1".into())?;
                need(p == m, "pattern must be K_{l,m,m}".into())?;
                let n = self.balanced_n()?;
                let t = t_of(l, m);
                let bound = (l + 2).max((3 * l + t).saturating_sub(2 * m + 2));
                need(
                    n >= bound,
                    format!("need n >= max(l+2, 3l+t-2m-2) = {bound}"),
                )?;
            }
            Construction::C5 => {
                need(l >= m && m > p && p >= 1, "need l >= m > p >= 1".into())?;
                let n = self.balanced_n()?;
                let t = t_of(l, m);
                // Also exactly the room needed for (l-m)-regular residuals.
                need(n + 1 >= l + t, format!("need n >= l+t-1 = {}", l + t - 1))?;
            }
            Construction::C4Cycle => need(n3 >= 2, "need n3 >= 2".into())?,
        }
        Ok(())
    }

    /// Index ranges (1-based, half-open) of the hub and tier vertices in
    /// each part; the residual graph lives outside them.
    pub fn excluded_ranges(&self) -> [Range<usize>; 3] {
        let (l, m) = (self.l, self.m);
        let s = self.sizes;
        match self.which {
            Construction::C1 | Construction::C2(_) => {
                [0, 1, 2].map(|i| s[i].saturating_sub(m) + 1..s[i] + 1)
            }
            Construction::C3 => [0, 1, 2].map(|_| 1..m),
            Construction::C4 => [0, 1, 2].map(|_| 1..m + t_of(l, m) + 1),
            Construction::C5 => [0, 1, 2].map(|_| 1..m + t_of(l, m)),
            Construction::C4Cycle => [0, 1, 2].map(|_| 1..2),
        }
    }

    /// The closed-form edge count matching this construction.
    pub fn formula(&self) -> Result<BoundRecord, FormulaError> {
        let [n1, n2, n3] = self.sizes.map(|x| x as u64);
        let (l, m, p) = (self.l as u64, self.m as u64, self.p as u64);
        match self.which {
            Construction::C1 | Construction::C2(_) => formulas::f_con1_upper(n1, n2, n3, l, m),
            Construction::C3 => formulas::f_con3_upper(n1, n2, n3, l, m, p),
            Construction::C4 => formulas::f_con4_upper(n1, l, m),
            Construction::C5 => formulas::f_con5_upper(n1, l, m, p),
            Construction::C4Cycle => formulas::f_c4(n1, n2, n3),
        }
    }

    /// Builds the graph. With `force`, parameter conditions that only
    /// guarantee saturation are skipped; conditions without which the
    /// description makes no sense are still enforced.
    pub fn build(&self, force: bool) -> Result<TripartiteGraph, ConstructionError> {
        if force {
            self.pattern()?;
        } else {
            self.validate()?;
        }
        let n = self.sizes;
        let sizes = PartSizes::new(n[0], n[1], n[2]).map_err(|e| self.invalid(e.to_string()))?;
        let mut d = Draft {
            b: GraphBuilder::new(sizes),
            n: self.sizes,
        };
        match self.which {
            Construction::C1 => {
                let removed = [(1, 2), (1, 3), (2, 3)].map(|(i, j)| ((i, n[i - 1]), (j, n[j - 1])));
                self.top_hubs(&mut d, removed)?
            }
            Construction::C2(i) => {
                if !(1..=3).contains(&i) {
                    return Err(self.invalid(format!("variant {i} not in 1..=3")));
                }
                let (j, k) = (i % 3 + 1, (i + 1) % 3 + 1);
                let top = |x: usize| n[x - 1];
                if top(i) < 2 {
                    return Err(self.infeasible(format!("part {i} needs two vertices")));
                }
                let removed = [
                    ((i, top(i)), (j, top(j))),
                    ((i, top(i) - 1), (k, top(k))),
                    ((j, top(j)), (k, top(k))),
                ];
                self.top_hubs(&mut d, removed)?
            }
            Construction::C3 => self.c3(&mut d)?,
            Construction::C4 => self.c4(&mut d)?,
            Construction::C5 => self.c5(&mut d)?,
            Construction::C4Cycle => {
                for i in 1..=3 {
                    let j = i % 3 + 1;
                    for b in 1..=d.n[j - 1] {
                        d.join(i, 1, j, b);
                    }
                }
            }
        }
        let g = d.b.build();
        if self.which == Construction::C4 {
            let k = self.l - self.m;
            let diag = residual_structure_check(&g, &self.excluded_ranges())
                .map_err(|e| self.infeasible(e.to_string()))?;
            if !diag.triangle_free || !diag.is_biregular(k) {
                return Err(ConstructionError::ResidualCheck {
                    which: self.which,
                    reason: format!(
                        "residual graph must be triangle-free with {k} neighbours per part"
                    ),
                });
            }
        }
        Ok(g)
    }

    /// Top-index hubs joined to everything, the two residual circulant
    /// families, then the listed hub edges removed.
    fn top_hubs(
        &self,
        d: &mut Draft,
        removed: [((usize, usize), (usize, usize)); 3],
    ) -> Result<(), ConstructionError> {
        let (l, m) = (self.l, self.m);
        let n = d.n;
        if n.iter().any(|&x| x < m) {
            return Err(self.infeasible("every part needs m hub vertices"));
        }
        for i in 1..=3 {
            for a in n[i - 1] - m + 1..=n[i - 1] {
                d.join_all(i, a);
            }
        }
        let k = l - m;
        if k > 0 {
            let res = n.map(|x| x - m);
            if res.contains(&0) && res.iter().any(|&x| x > 0) {
                return Err(self.infeasible("residual part is empty"));
            }
            for a in 1..=res[2] {
                for j in [1, 2] {
                    for b in a..a + k {
                        d.join(3, a, j, rho(b, res[j - 1]));
                    }
                }
            }
            for a in 1..=res[1] {
                for b in a + k..a + 2 * k {
                    d.join(2, a, 1, rho(b, res[0]));
                }
            }
        }
        for ((i, a), (j, b)) in removed {
            d.unjoin(i, a, j, b).map_err(|_| {
                self.infeasible(format!("v{i}^{a} v{j}^{b} is not an edge to remove"))
            })?;
        }
        Ok(())
    }

    fn c3(&self, d: &mut Draft) -> Result<(), ConstructionError> {
        let (l, m) = (self.l, self.m);
        let n = d.n;
        let hubs = m - 1;
        if n.iter().any(|&x| x < hubs) {
            return Err(self.infeasible("every part needs m-1 hub vertices"));
        }
        for i in 1..=3 {
            for a in 1..=hubs {
                d.join_all(i, a);
            }
        }
        let k = l - m;
        let res = n.map(|x| x - hubs);
        if k > 0 {
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                if res[j - 1] > 0 && res[i - 1] == 0 {
                    return Err(self.infeasible(format!("residual part {i} is empty")));
                }
                for a in 1..=res[j - 1] {
                    for b in a..a + k {
                        d.join(j, hubs + a, i, hubs + rho(b, res[i - 1]));
                    }
                }
            }
        }
        Ok(())
    }

    fn c4(&self, d: &mut Draft) -> Result<(), ConstructionError> {
        let (l, m) = (self.l, self.m);
        let n = self.balanced_n()?;
        let t = t_of(l, m);
        if n < m + t {
            return Err(self.infeasible("parts too small for hub and tier sets"));
        }
        hubs_and_tiers(d, m, t);
        let k = l - m;
        let r = n - m - t;
        let residual = triangle_free_residual(r, k).ok_or_else(|| {
            self.infeasible(format!(
                "no triangle-free {k}-regular residual on {r} vertices per part"
            ))
        })?;
        let off = m + t;
        for ((i, a), (j, b)) in residual {
            d.join(i, off + a, j, off + b);
        }
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            d.unjoin(i, 1, j, 1)
                .map_err(|_| self.infeasible("hub edge to remove is missing"))?;
        }
        Ok(())
    }

    fn c5(&self, d: &mut Draft) -> Result<(), ConstructionError> {
        let (l, m) = (self.l, self.m);
        let n = self.balanced_n()?;
        let t = t_of(l, m);
        let hubs = m - 1;
        if n < hubs + t {
            return Err(self.infeasible("parts too small for hub and tier sets"));
        }
        hubs_and_tiers(d, hubs, t);
        let k = l - m;
        let r = n - hubs - t;
        if k > 0 && r == 0 {
            return Err(self.infeasible("residual parts are empty"));
        }
        let off = hubs + t;
        if k > 0 {
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                for a in 1..=r {
                    for b in a..a + k {
                        d.join(j, off + a, i, off + rho(b, r));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Bottom `h` hubs joined to everything; the next `t` vertices of each part
/// form tier sets, joined completely to each other.
fn hubs_and_tiers(d: &mut Draft, h: usize, t: usize) {
    for i in 1..=3 {
        for a in 1..=h {
            d.join_all(i, a);
        }
    }
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        for a in h + 1..=h + t {
            for b in h + 1..=h + t {
                d.join(i, a, j, b);
            }
        }
    }
}

type LocalEdge = ((usize, usize), (usize, usize));

/// A triangle-free tripartite graph on three classes of `r` positions where
/// every vertex has exactly `k` neighbours in each other class.
///
/// The cyclic layout (class 3 windows `[a, a+k)` into classes 1 and 2,
/// class 2 windows `[a+k, a+2k)` into class 1) is triangle-free exactly
/// when `r >= 3k - 1`. For even `r >= 2k` below that, each class is split
/// into halves `X_i`, `Y_i` with circulants on `X1X2`, `Y1Y2`, `X1X3`,
/// `Y1Y3`, `X2Y3`, `Y2X3`: a vertex of `X1` sees only `X2 ∪ X3`, which
/// span no edge, and symmetrically for the other halves.
pub fn triangle_free_residual(r: usize, k: usize) -> Option<Vec<LocalEdge>> {
    let mut out = Vec::new();
    if k == 0 {
        return Some(out);
    }
    if r + 1 >= 3 * k {
        for a in 1..=r {
            for b in a..a + k {
                out.push(((3, a), (1, rho(b, r))));
                out.push(((3, a), (2, rho(b, r))));
            }
            for b in a + k..a + 2 * k {
                out.push(((2, a), (1, rho(b, r))));
            }
        }
        return Some(out);
    }
    if r.is_multiple_of(2) && r >= 2 * k {
        let h = r / 2;
        // (class, upper half?) pairs joined by a circulant.
        let blocks = [
            ((1, false), (2, false)),
            ((1, true), (2, true)),
            ((1, false), (3, false)),
            ((1, true), (3, true)),
            ((2, false), (3, true)),
            ((2, true), (3, false)),
        ];
        let pos = |upper: bool, a: usize| if upper { h + a } else { a };
        for ((i, ui), (j, uj)) in blocks {
            for a in 1..=h {
                for b in a..a + k {
                    out.push(((i, pos(ui, a)), (j, pos(uj, rho(b, h)))));
                }
            }
        }
        return Some(out);
    }
    None
}

struct Draft {
    b: GraphBuilder,
    n: [usize; 3],
}

impl Draft {
    fn join(&mut self, i: usize, a: usize, j: usize, b: usize) {
        self.b
            .insert_edge(VertexRef::new(i, a), VertexRef::new(j, b))
            .expect("generator indices are in range");
    }

    fn unjoin(&mut self, i: usize, a: usize, j: usize, b: usize) -> Result<(), ()> {
        self.b
            .remove_edge(VertexRef::new(i, a), VertexRef::new(j, b))
            .map_err(|_| ())
    }

    fn join_all(&mut self, i: usize, a: usize) {
        for j in (1..=3).filter(|&j| j != i) {
            for b in 1..=self.n[j - 1] {
                self.join(i, a, j, b);
            }
        }
    }
}

/// Smallest balanced part size at which `which` is valid for the pattern.
pub fn smallest_n(
    which: Construction,
    l: usize,
    m: usize,
    p: usize,
) -> Result<usize, ConstructionError> {
    let probe = |n: usize| ConstructionParams::new(which, l, m, p, [n; 3]);
    probe(1).pattern()?;
    for n in 1..=4 * (l + 3) {
        if probe(n).validate().is_ok() {
            return Ok(n);
        }
    }
    Err(probe(1).validate().unwrap_err())
}

pub fn construction1(
    l: usize,
    m: usize,
    n1: usize,
    n2: usize,
    n3: usize,
) -> Result<TripartiteGraph, ConstructionError> {
    ConstructionParams::new(Construction::C1, l, m, m, [n1, n2, n3]).build(false)
}

pub fn construction2(
    i: usize,
    l: usize,
    m: usize,
    n1: usize,
    n2: usize,
    n3: usize,
) -> Result<TripartiteGraph, ConstructionError> {
    ConstructionParams::new(Construction::C2(i), l, m, m, [n1, n2, n3]).build(false)
}

pub fn construction3(
    l: usize,
    m: usize,
    p: usize,
    n1: usize,
    n2: usize,
    n3: usize,
) -> Result<TripartiteGraph, ConstructionError> {
    ConstructionParams::new(Construction::C3, l, m, p, [n1, n2, n3]).build(false)
}

pub fn construction4(l: usize, m: usize, n: usize) -> Result<TripartiteGraph, ConstructionError> {
    ConstructionParams::new(Construction::C4, l, m, m, [n; 3]).build(false)
}

pub fn construction5(
    l: usize,
    m: usize,
    p: usize,
    n: usize,
) -> Result<TripartiteGraph, ConstructionError> {
    ConstructionParams::new(Construction::C5, l, m, p, [n; 3]).build(false)
}

pub fn construction_c4(
    n1: usize,
    n2: usize,
    n3: usize,
) -> Result<TripartiteGraph, ConstructionError> {
    ConstructionParams::new(Construction::C4Cycle, 2, 2, 0, [n1, n2, n3]).build(false)
}
