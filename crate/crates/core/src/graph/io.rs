//! JSON and edge-list encodings.
//!
//! JSON: `{"parts":[n1,n2,n3],"edges":[[i,a,j,b],...]}` with `i < j`.
//! Edge list: a header line `tripartite n1 n2 n3` followed by one
//! `i a j b` line per edge. Both writers emit edges in canonical order.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GraphBuilder, GraphError, PartSizes, TripartiteGraph, VertexRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Json,
    Edges,
}

impl GraphFormat {
    pub fn write(self, g: &TripartiteGraph) -> String {
        match self {
            GraphFormat::Json => to_json(g),
            GraphFormat::Edges => to_edge_list(g),
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(GraphFormat::Json),
            "edges" => Ok(GraphFormat::Edges),
            other => Err(format!(
                "unknown graph format `{other}` (expected json or edges)"
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    parts: [usize; 3],
    edges: Vec<[usize; 4]>,
}

impl Serialize for TripartiteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphDoc {
            parts: self.sizes.as_array(),
            edges: self.edges().map(Into::into).collect(),
        }
        .serialize(s)
    }
}

/// Compact JSON followed by a newline.
pub fn to_json(g: &TripartiteGraph) -> String {
    let mut out = serde_json::to_string(g).expect("graph serialization cannot fail");
    out.push('\n');
    out
}

pub fn to_edge_list(g: &TripartiteGraph) -> String {
    let [n1, n2, n3] = g.sizes.as_array();
    let mut out = format!("tripartite {n1} {n2} {n3}\n");
    for e in g.edges() {
        let [i, a, j, b]: [usize; 4] = e.into();
        writeln!(out, "{i} {a} {j} {b}").unwrap();
    }
    out
}

pub fn from_json(input: &str) -> Result<TripartiteGraph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(input).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        GraphError::Parse {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    })?;
    let [n1, n2, n3] = doc.parts;
    let sizes = PartSizes::new(n1, n2, n3).map_err(|e| GraphError::Parse {
        position: "parts".into(),
        message: e.to_string(),
    })?;
    let mut b = GraphBuilder::new(sizes);
    for (k, e) in doc.edges.iter().enumerate() {
        add_checked(&mut b, *e).map_err(|message| GraphError::Parse {
            position: format!("edges[{k}]"),
            message,
        })?;
    }
    Ok(b.build())
}

pub fn from_edge_list(input: &str) -> Result<TripartiteGraph, GraphError> {
    let mut lines = input
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| GraphError::Parse {
        position: "line 1, column 1".into(),
        message: "missing `tripartite n1 n2 n3` header".into(),
    })?;
    let fields = tokens(header);
    if fields.first().map(|t| t.1) != Some("tripartite") || fields.len() != 4 {
        return Err(GraphError::Parse {
            position: format!("line {}, column 1", hline + 1),
            message: "expected header `tripartite n1 n2 n3`".into(),
        });
    }
    let parts = numbers::<3>(hline, &fields[1..])?;
    let sizes = PartSizes::new(parts[0], parts[1], parts[2]).map_err(|e| GraphError::Parse {
        position: format!("line {}, column {}", hline + 1, fields[1].0),
        message: e.to_string(),
    })?;
    let mut b = GraphBuilder::new(sizes);
    for (ln, line) in lines {
        let fields = tokens(line);
        if fields.len() != 4 {
            return Err(GraphError::Parse {
                position: format!(
                    "line {}, column {}",
                    ln + 1,
                    fields.first().map_or(1, |t| t.0)
                ),
                message: format!("expected 4 fields `i a j b`, found {}", fields.len()),
            });
        }
        let e = numbers::<4>(ln, &fields)?;
        add_checked(&mut b, e).map_err(|message| GraphError::Parse {
            position: format!("line {}, column {}", ln + 1, fields[0].0),
            message,
        })?;
    }
    Ok(b.build())
}

/// Picks the decoder from the first non-blank byte: `{` means JSON.
pub fn parse_graph(input: &str) -> Result<TripartiteGraph, GraphError> {
    if input.trim_start().starts_with('{') {
        from_json(input)
    } else {
        from_edge_list(input)
    }
}

fn add_checked(b: &mut GraphBuilder, [i, a, j, c]: [usize; 4]) -> Result<(), String> {
    if i >= j {
        return Err(format!("expected part {i} < part {j}"));
    }
    b.add_edge(VertexRef::new(i, a), VertexRef::new(j, c))
        .map_err(|e| e.to_string())
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn numbers<const N: usize>(
    line: usize,
    fields: &[(usize, &str)],
) -> Result<[usize; N], GraphError> {
    let mut out = [0; N];
    for (slot, (col, tok)) in out.iter_mut().zip(fields) {
        *slot = tok.parse().map_err(|_| GraphError::Parse {
            position: format!("line {}, column {}", line + 1, col),
            message: format!("`{tok}` is not a non-negative integer"),
        })?;
    }
    Ok(out)
}
