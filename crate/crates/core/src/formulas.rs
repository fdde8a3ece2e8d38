//! Closed-form saturation values and bounds, evaluated in exact checked
//! integer arithmetic.
//!
//! Every function returns a [`BoundRecord`] whose `hypothesis` states
//! whether the parameter conditions attached to the formula hold, read
//! literally. Conditions of the form "n sufficiently large" have no finite
//! test and are reported as [`Hypothesis::Unknown`].

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("part sizes must satisfy n1 >= n2 >= n3 >= 1, got ({0}, {1}, {2})")]
    Ordering(u64, u64, u64),
    #[error("invalid parameters: {0}")]
    Shape(String),
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("unknown formula `{0}`")]
    UnknownName(String),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("unexpected parameter `{0}`")]
    UnexpectedParam(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
    Reference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Satisfied,
    Violated,
    /// No finite check exists for the stated condition.
    Unknown,
}

impl Hypothesis {
    fn from_bool(b: bool) -> Self {
        if b {
            Hypothesis::Satisfied
        } else {
            Hypothesis::Violated
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub params: BTreeMap<String, u64>,
    pub value: i128,
    pub kind: BoundKind,
    pub hypothesis: Hypothesis,
    /// `true` only when `hypothesis` is `Satisfied`.
    pub hypothesis_satisfied: bool,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Checked `i128` that poisons on overflow.
#[derive(Clone, Copy, Debug)]
struct Wide(Option<i128>);

fn w(x: u64) -> Wide {
    Wide(Some(x as i128))
}

fn c(x: i128) -> Wide {
    Wide(Some(x))
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_add(b)))
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_sub(b)))
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).and_then(|(a, b)| a.checked_mul(b)))
    }
}

impl Wide {
    fn min(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).map(|(a, b)| a.min(b)))
    }

    fn max(self, o: Wide) -> Wide {
        Wide(self.0.zip(o.0).map(|(a, b)| a.max(b)))
    }

    /// Floor division by a positive constant.
    fn div_floor(self, d: i128) -> Wide {
        Wide(self.0.map(|a| a.div_euclid(d)))
    }

    fn at_most(self, o: Wide) -> Option<bool> {
        self.0.zip(o.0).map(|(a, b)| a <= b)
    }

    fn get(self, name: &'static str) -> Result<i128, FormulaError> {
        self.0.ok_or(FormulaError::Overflow(name))
    }
}

struct Rec {
    name: &'static str,
    params: Vec<(&'static str, u64)>,
    kind: BoundKind,
    anchor: &'static str,
}

impl Rec {
    fn finish(
        self,
        value: Wide,
        hypothesis: Hypothesis,
        note: Option<String>,
    ) -> Result<BoundRecord, FormulaError> {
        Ok(BoundRecord {
            value: value.get(self.name)?,
            name: self.name.into(),
            params: self
                .params
                .into_iter()
                .map(|(k, v)| (k.into(), v))
                .collect(),
            kind: self.kind,
            hypothesis_satisfied: hypothesis == Hypothesis::Satisfied,
            hypothesis,
            anchor: self.anchor.into(),
            note,
        })
    }
}

fn ordered(n1: u64, n2: u64, n3: u64) -> Result<(), FormulaError> {
    if n1 >= n2 && n2 >= n3 && n3 >= 1 {
        Ok(())
    } else {
        Err(FormulaError::Ordering(n1, n2, n3))
    }
}

fn shape(ok: bool, msg: &str) -> Result<(), FormulaError> {
    if ok {
        Ok(())
    } else {
        Err(FormulaError::Shape(msg.into()))
    }
}

/// `n >= bound`, with an overflowing bound counting as unmet.
fn at_least(n: u64, bound: Wide) -> bool {
    bound.at_most(w(n)).unwrap_or(false)
}

fn half_gap(l: u64, m: u64) -> u64 {
    (l - m) / 2
}

/// Value of the top-hub constructions for `K_{ℓ,m,m}`:
/// `2m(n1+n2+n3) + (ℓ-m)(n2+2n3) - 3ℓm - 3`.
pub fn f_con1_upper(
    n1: u64,
    n2: u64,
    n3: u64,
    l: u64,
    m: u64,
) -> Result<BoundRecord, FormulaError> {
    ordered(n1, n2, n3)?;
    shape(l >= m && m >= 1, "need l >= m >= 1")?;
    let total = w(n1) + w(n2) + w(n3);
    let value =
        c(2) * w(m) * total + (w(l) - w(m)) * (w(n2) + c(2) * w(n3)) - c(3) * w(l) * w(m) - c(3);
    let bound = (w(l) + c(2)).max(c(3) * w(l) - c(2) * w(m) - c(1));
    Rec {
        name: "f_con1_upper",
        params: vec![("n1", n1), ("n2", n2), ("n3", n3), ("l", l), ("m", m)],
        kind: BoundKind::Upper,
        anchor:
            "K_{l,m,m} upper bound from the top-hub construction; needs n3 >= max(l+2, 3l-2m-1)",
    }
    .finish(value, Hypothesis::from_bool(at_least(n3, bound)), None)
}

/// Value of the `(m-1)`-hub construction for `K_{ℓ,m,p}` with `m > p`:
/// `2(m-1)(n1+n2+n3) + (ℓ-m)(n2+2n3) - 3ℓ(m-1) + 3m - 3`.
pub fn f_con3_upper(
    n1: u64,
    n2: u64,
    n3: u64,
    l: u64,
    m: u64,
    p: u64,
) -> Result<BoundRecord, FormulaError> {
    ordered(n1, n2, n3)?;
    shape(l >= m && m > p && p >= 1, "need l >= m > p >= 1")?;
    let total = w(n1) + w(n2) + w(n3);
    let value = c(2) * (w(m) - c(1)) * total + (w(l) - w(m)) * (w(n2) + c(2) * w(n3))
        - c(3) * w(l) * (w(m) - c(1))
        + c(3) * w(m)
        - c(3);
    Rec {
        name: "f_con3_upper",
        params: vec![
            ("n1", n1),
            ("n2", n2),
            ("n3", n3),
            ("l", l),
            ("m", m),
            ("p", p),
        ],
        kind: BoundKind::Upper,
        anchor: "K_{l,m,p} upper bound (m > p) from the (m-1)-hub construction; needs n3 >= l",
    }
    .finish(value, Hypothesis::from_bool(n3 >= l), None)
}

/// Value of the balanced hub-and-tier construction on `K_{n,n,n}` for `K_{ℓ,m,m}`, with
/// `t = ⌊(ℓ-m)/2⌋`: `3(ℓ+m)n - 3(ℓ-m-t)t - 3ℓm - 3`.
pub fn f_con4_upper(n: u64, l: u64, m: u64) -> Result<BoundRecord, FormulaError> {
    shape(n >= 1, "need n >= 1")?;
    shape(l >= m && m >= 1, "need l >= m >= 1")?;
    let t = w(half_gap(l, m));
    let value =
        c(3) * (w(l) + w(m)) * w(n) - c(3) * (w(l) - w(m) - t) * t - c(3) * w(l) * w(m) - c(3);
    let bound = (w(l) + c(2)).max(c(3) * w(l) + t - c(2) * w(m) - c(2));
    Rec {
        name: "f_con4_upper",
        params: vec![("n", n), ("l", l), ("m", m)],
        kind: BoundKind::Upper,
        anchor: "K_{l,m,m} upper bound on balanced hosts with hub and tier sets; needs n >= max(l+2, 3l+t-2m-2), t = floor((l-m)/2)",
    }
    .finish(
        value,
        Hypothesis::from_bool(at_least(n, bound)),
        Some("bound for K_{l,m,m}; the pattern written with p in the source statement is read as K_{l,m,m}".into()),
    )
}

/// Value of the balanced tier construction on `K_{n,n,n}` for `K_{ℓ,m,p}` with `m > p`:
/// `3(ℓ+m-2)n - 3(m-1)(ℓ-1) + 3t² - 3(ℓ-m)t`.
pub fn f_con5_upper(n: u64, l: u64, m: u64, p: u64) -> Result<BoundRecord, FormulaError> {
    shape(n >= 1, "need n >= 1")?;
    shape(l >= m && m > p && p >= 1, "need l >= m > p >= 1")?;
    let t = w(half_gap(l, m));
    let value = c(3) * (w(l) + w(m) - c(2)) * w(n) - c(3) * (w(m) - c(1)) * (w(l) - c(1))
        + c(3) * t * t
        - c(3) * (w(l) - w(m)) * t;
    Rec {
        name: "f_con5_upper",
        params: vec![("n", n), ("l", l), ("m", m), ("p", p)],
        kind: BoundKind::Upper,
        anchor: "K_{l,m,p} upper bound (m > p) on balanced hosts with tier sets; needs n >= l+t-1, t = floor((l-m)/2)",
    }
    .finish(value, Hypothesis::from_bool(at_least(n, w(l) + t - c(1))), None)
}

fn lll_threshold(k: u64) -> Wide {
    c(32) * w(k) * w(k) * w(k) + c(40) * w(k) * w(k) + c(11) * w(k)
}

/// `sat(K_{n1,n2,n3}, K_{ℓ,ℓ,ℓ}) = 2ℓ(n1+n2+n3) - 3ℓ² - 3`, exact once
/// `n3 >= 32ℓ³ + 40ℓ² + 11ℓ`; otherwise only the construction value.
pub fn f_sat_lll(n1: u64, n2: u64, n3: u64, l: u64) -> Result<BoundRecord, FormulaError> {
    shape(l >= 1, "need l >= 1")?;
    let total = w(n1) + w(n2) + w(n3);
    let value = c(2) * w(l) * total - c(3) * w(l) * w(l) - c(3);
    let holds = n1 >= n2 && n2 >= n3 && at_least(n3, lll_threshold(l));
    Rec {
        name: "f_sat_lll",
        params: vec![("n1", n1), ("n2", n2), ("n3", n3), ("l", l)],
        kind: if holds {
            BoundKind::Exact
        } else {
            BoundKind::Upper
        },
        anchor: "exact sat(K_{n1,n2,n3}, K_{l,l,l}); needs n1 >= n2 >= n3 >= 32l^3+40l^2+11l",
    }
    .finish(value, Hypothesis::from_bool(holds), None)
}

/// `sat(K_{n1,n2,n3}, K_{ℓ,ℓ,ℓ-1}) = 2(ℓ-1)(n1+n2+n3) - 3(ℓ-1)²` once
/// `n3 >= 32(ℓ-1)³ + 40(ℓ-1)² + 11(ℓ-1)`.
pub fn f_sat_lll1(n1: u64, n2: u64, n3: u64, l: u64) -> Result<BoundRecord, FormulaError> {
    shape(l >= 2, "need l >= 2")?;
    let k = l - 1;
    let total = w(n1) + w(n2) + w(n3);
    let value = c(2) * w(k) * total - c(3) * w(k) * w(k);
    let holds = n1 >= n2 && n2 >= n3 && at_least(n3, lll_threshold(k));
    Rec {
        name: "f_sat_lll1",
        params: vec![("n1", n1), ("n2", n2), ("n3", n3), ("l", l)],
        kind: if holds { BoundKind::Exact } else { BoundKind::Upper },
        anchor: "exact sat(K_{n1,n2,n3}, K_{l,l,l-1}); needs n1 >= n2 >= n3 >= 32(l-1)^3+40(l-1)^2+11(l-1)",
    }
    .finish(value, Hypothesis::from_bool(holds), None)
}

/// `sat(K_{n,n,n}, K_{ℓ,ℓ,ℓ-2}) >= 6(ℓ-1)n - (72ℓ² - 40ℓ + 54)` for `n`
/// sufficiently large.
pub fn f_lll2_lower(n: u64, l: u64) -> Result<BoundRecord, FormulaError> {
    shape(l >= 3, "need l >= 3")?;
    let constant = c(72) * w(l) * w(l) - c(40) * w(l) + c(54);
    let value = c(6) * (w(l) - c(1)) * w(n) - constant;
    Rec {
        name: "f_lll2_lower",
        params: vec![("n", n), ("l", l)],
        kind: BoundKind::Lower,
        anchor: "lower bound on sat(K_{n,n,n}, K_{l,l,l-2}); holds for n sufficiently large",
    }
    .finish(
        value,
        Hypothesis::Unknown,
        Some("\"n sufficiently large\" has no explicit threshold".into()),
    )
}

/// `sat(K_{n1,n2,n3}, C4) = n1 + n2 + n3` for `n1 >= n2 >= n3 >= 2`.
pub fn f_c4(n1: u64, n2: u64, n3: u64) -> Result<BoundRecord, FormulaError> {
    let value = w(n1) + w(n2) + w(n3);
    Rec {
        name: "f_c4",
        params: vec![("n1", n1), ("n2", n2), ("n3", n3)],
        kind: BoundKind::Exact,
        anchor: "exact sat(K_{n1,n2,n3}, C4); needs n1 >= n2 >= n3 >= 2",
    }
    .finish(
        value,
        Hypothesis::from_bool(n1 >= n2 && n2 >= n3 && n3 >= 2),
        None,
    )
}

/// `sat(n, K_k) = (k-2)n - C(k-1, 2)`.
pub fn f_ehm(n: u64, k: u64) -> Result<BoundRecord, FormulaError> {
    shape(k >= 2, "need k >= 2")?;
    let value = (w(k) - c(2)) * w(n) - ((w(k) - c(1)) * (w(k) - c(2))).div_floor(2);
    Rec {
        name: "f_ehm",
        params: vec![("n", n), ("k", k)],
        kind: BoundKind::Reference,
        anchor: "clique saturation sat(n, K_k)",
    }
    .finish(value, Hypothesis::from_bool(n >= k), None)
}

/// `sat(K_{(n1,n2)}, K_{(ℓ,m)}) = (m-1)n1 + (ℓ-1)n2 - (m-1)(ℓ-1)`.
pub fn f_bw(n1: u64, n2: u64, l: u64, m: u64) -> Result<BoundRecord, FormulaError> {
    shape(l >= 1 && m >= 1, "need l, m >= 1")?;
    let value = (w(m) - c(1)) * w(n1) + (w(l) - c(1)) * w(n2) - (w(m) - c(1)) * (w(l) - c(1));
    Rec {
        name: "f_bw",
        params: vec![("n1", n1), ("n2", n2), ("l", l), ("m", m)],
        kind: BoundKind::Reference,
        anchor: "bipartite saturation with fixed sides; needs 2 <= l <= n1 and 2 <= m <= n2",
    }
    .finish(
        value,
        Hypothesis::from_bool(2 <= l && l <= n1 && 2 <= m && m <= n2),
        None,
    )
}

/// `sat(K_{n,n}, K_{ℓ,m}) <= (ℓ+m-2)n - ⌊(ℓ+m-2)²/4⌋`.
pub fn f_ms_upper(n: u64, l: u64, m: u64) -> Result<BoundRecord, FormulaError> {
    shape(l >= 1 && m >= 1, "need l, m >= 1")?;
    let s = w(l) + w(m) - c(2);
    let value = s * w(n) - (s * s).div_floor(4);
    Rec {
        name: "f_ms_upper",
        params: vec![("n", n), ("l", l), ("m", m)],
        kind: BoundKind::Reference,
        anchor: "upper bound for sat(K_{n,n}, K_{l,m})",
    }
    .finish(value, Hypothesis::from_bool(n >= l.max(m)), None)
}

/// `sat(K_{n,n}, K_{ℓ,m}) >= (ℓ+m-2)n - (ℓ+m-2)²`.
pub fn f_gks_lower(n: u64, l: u64, m: u64) -> Result<BoundRecord, FormulaError> {
    shape(l >= 1 && m >= 1, "need l, m >= 1")?;
    let s = w(l) + w(m) - c(2);
    let value = s * w(n) - s * s;
    Rec {
        name: "f_gks_lower",
        params: vec![("n", n), ("l", l), ("m", m)],
        kind: BoundKind::Reference,
        anchor: "lower bound for sat(K_{n,n}, K_{l,m})",
    }
    .finish(value, Hypothesis::from_bool(n >= l.max(m)), None)
}

/// `sat(K_k^n, K_3) = min{2kn + n² - 4k - 1, 3kn - 3n - 6}` for `k >= 3`,
/// `n >= 100`.
pub fn f_fjpw(k: u64, n: u64) -> Result<BoundRecord, FormulaError> {
    let a = c(2) * w(k) * w(n) + w(n) * w(n) - c(4) * w(k) - c(1);
    let b = c(3) * w(k) * w(n) - c(3) * w(n) - c(6);
    Rec {
        name: "f_fjpw",
        params: vec![("k", k), ("n", n)],
        kind: BoundKind::Reference,
        anchor: "triangle saturation in balanced k-partite hosts sat(K_k^n, K_3); needs k >= 3, n >= 100",
    }
    .finish(a.min(b), Hypothesis::from_bool(k >= 3 && n >= 100), None)
}

/// Names accepted by [`evaluate`], with their parameter lists.
pub const FORMULAS: &[(&str, &[&str])] = &[
    ("con1_upper", &["n1", "n2", "n3", "l", "m"]),
    ("con3_upper", &["n1", "n2", "n3", "l", "m", "p"]),
    ("con4_upper", &["n", "l", "m"]),
    ("con5_upper", &["n", "l", "m", "p"]),
    ("sat_lll", &["n1", "n2", "n3", "l"]),
    ("sat_lll1", &["n1", "n2", "n3", "l"]),
    ("lll2_lower", &["n", "l"]),
    ("c4", &["n1", "n2", "n3"]),
    ("ehm", &["n", "k"]),
    ("bw", &["n1", "n2", "l", "m"]),
    ("ms_upper", &["n", "l", "m"]),
    ("gks_lower", &["n", "l", "m"]),
    ("fjpw", &["k", "n"]),
];

/// Evaluates a formula by name (with or without the `f_` prefix) from named
/// parameters.
pub fn evaluate(name: &str, params: &BTreeMap<String, u64>) -> Result<BoundRecord, FormulaError> {
    let key = name.strip_prefix("f_").unwrap_or(name);
    let (_, wanted) = FORMULAS
        .iter()
        .find(|(n, _)| *n == key)
        .ok_or_else(|| FormulaError::UnknownName(name.into()))?;
    if let Some(extra) = params.keys().find(|k| !wanted.contains(&k.as_str())) {
        return Err(FormulaError::UnexpectedParam(extra.clone()));
    }
    let g = |k: &str| {
        params
            .get(k)
            .copied()
            .ok_or_else(|| FormulaError::MissingParam(k.into()))
    };
    match key {
        "con1_upper" => f_con1_upper(g("n1")?, g("n2")?, g("n3")?, g("l")?, g("m")?),
        "con3_upper" => f_con3_upper(g("n1")?, g("n2")?, g("n3")?, g("l")?, g("m")?, g("p")?),
        "con4_upper" => f_con4_upper(g("n")?, g("l")?, g("m")?),
        "con5_upper" => f_con5_upper(g("n")?, g("l")?, g("m")?, g("p")?),
        "sat_lll" => f_sat_lll(g("n1")?, g("n2")?, g("n3")?, g("l")?),
        "sat_lll1" => f_sat_lll1(g("n1")?, g("n2")?, g("n3")?, g("l")?),
        "lll2_lower" => f_lll2_lower(g("n")?, g("l")?),
        "c4" => f_c4(g("n1")?, g("n2")?, g("n3")?),
        "ehm" => f_ehm(g("n")?, g("k")?),
        "bw" => f_bw(g("n1")?, g("n2")?, g("l")?, g("m")?),
        "ms_upper" => f_ms_upper(g("n")?, g("l")?, g("m")?),
        "gks_lower" => f_gks_lower(g("n")?, g("l")?, g("m")?),
        "fjpw" => f_fjpw(g("k")?, g("n")?),
        _ => unreachable!("table and match agree"),
    }
}
