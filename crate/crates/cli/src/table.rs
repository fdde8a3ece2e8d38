//! Experiment specs and the CSV tables they produce.
//!
//! ```json
//! {"version": 1, "runs": [
//!   {"action": "construct", "construction": "4", "l": 3, "m": 1, "n": [6, 6, 6],
//!    "greedy_trials": 20, "seed": 1, "exact": false, "out": "c4.json"},
//!   {"action": "sat", "host": [3, 2, 2], "pattern": [2, 2, 0], "exact": true}
//! ]}
//! ```
//!
//! Every run is parsed and checked before the first one executes. Relative
//! `out` paths are resolved against the spec file's directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;
use trisat::constructions::{Construction, ConstructionParams};
use trisat::graph::to_json;
use trisat::search::{sat_exact, sat_greedy, SearchOptions, EXACT_EDGE_GUARD};
use trisat::{PartSizes, PatternSpec, TripartiteGraph};

use crate::{construction_params, part_sizes, Failure};

pub const HEADER: &str = "action,construction,variant,l,m,p,n1,n2,n3,construction_edges,formula_value,greedy_min,exact_value,hypothesis_satisfied";

pub const VERSION: u64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    version: u64,
    runs: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(tag = "action", rename_all = "lowercase", deny_unknown_fields)]
enum Run {
    Construct {
        construction: String,
        #[serde(default)]
        variant: Option<usize>,
        #[serde(default)]
        l: Option<usize>,
        #[serde(default)]
        m: Option<usize>,
        #[serde(default)]
        p: Option<usize>,
        #[serde(default)]
        n: Option<[usize; 3]>,
        #[serde(default)]
        force: bool,
        #[serde(flatten)]
        probe: Probe,
    },
    Sat {
        host: [usize; 3],
        pattern: PatternSpec,
        #[serde(flatten)]
        probe: Probe,
    },
}

/// Searches run on the host and pattern of a row.
#[derive(Deserialize, Default)]
struct Probe {
    #[serde(default)]
    greedy_trials: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    exact: bool,
    #[serde(default)]
    out: Option<PathBuf>,
}

/// A run after validation.
struct Job {
    action: &'static str,
    params: Option<ConstructionParams>,
    force: bool,
    host: PartSizes,
    pattern: PatternSpec,
    greedy_trials: usize,
    seed: u64,
    exact: bool,
    out: Option<PathBuf>,
}

fn invalid(index: usize, message: impl std::fmt::Display) -> Failure {
    Failure::new("invalid_spec", format!("runs[{index}]: {message}"))
}

fn job(index: usize, value: Value, base: &Path) -> Result<Job, Failure> {
    let run: Run = serde_json::from_value(value).map_err(|e| invalid(index, e))?;
    let (job, probe) = match run {
        Run::Construct {
            construction,
            variant,
            l,
            m,
            p,
            n,
            force,
            probe,
        } => {
            let which: Construction = construction.parse().map_err(|e| invalid(index, e))?;
            let params = construction_params(which, variant, l, m, p, n)
                .map_err(|e| invalid(index, e.message))?;
            if !force {
                params.validate().map_err(|e| invalid(index, e))?;
            }
            let pattern = params.pattern().map_err(|e| invalid(index, e))?;
            let host = part_sizes(params.sizes).map_err(|e| invalid(index, e.message))?;
            let job = Job {
                action: "construct",
                params: Some(params),
                force,
                host,
                pattern,
                greedy_trials: 0,
                seed: 0,
                exact: false,
                out: None,
            };
            (job, probe)
        }
        Run::Sat {
            host,
            pattern,
            probe,
        } => {
            let host = part_sizes(host).map_err(|e| invalid(index, e.message))?;
            let job = Job {
                action: "sat",
                params: None,
                force: false,
                host,
                pattern,
                greedy_trials: 0,
                seed: 0,
                exact: false,
                out: None,
            };
            (job, probe)
        }
    };
    if probe.exact && job.host.host_edge_count() > EXACT_EDGE_GUARD {
        return Err(invalid(
            index,
            format!(
                "exact search on a host with {} edges exceeds the limit of {EXACT_EDGE_GUARD}",
                job.host.host_edge_count()
            ),
        ));
    }
    Ok(Job {
        greedy_trials: probe.greedy_trials,
        seed: probe.seed,
        exact: probe.exact,
        out: probe.out.map(|p| base.join(p)),
        ..job
    })
}

/// Parses and validates a spec; `base` resolves relative output paths.
fn parse(text: &str, base: &Path) -> Result<Vec<Job>, Failure> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| Failure::new("invalid_spec", e))?;
    if doc.version != VERSION {
        return Err(Failure::new(
            "invalid_spec",
            format!("unsupported version {} (expected {VERSION})", doc.version),
        ));
    }
    doc.runs
        .into_iter()
        .enumerate()
        .map(|(i, v)| job(i, v, base))
        .collect()
}

fn cell<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn execute(job: &Job) -> Result<String, Failure> {
    let search_err = |e: trisat::search::SearchError| Failure::new("search", e);
    let mut witness: Option<TripartiteGraph> = None;
    let (mut construction, mut variant) = (None, None);
    let (mut edges, mut formula, mut hypothesis) = (None, None, None);
    if let Some(params) = &job.params {
        let g = params
            .build(job.force)
            .map_err(|e| Failure::new("invalid_parameters", e))?;
        construction = Some(match params.which {
            Construction::C2(_) => "2".to_string(),
            w => w.to_string(),
        });
        if let Construction::C2(i) = params.which {
            variant = Some(i);
        }
        edges = Some(g.edge_count());
        if let Ok(record) = params.formula() {
            formula = Some(record.value);
            hypothesis = Some(record.hypothesis_satisfied);
        }
        witness = Some(g);
    }
    let greedy = if job.greedy_trials > 0 {
        Some(sat_greedy(job.host, &job.pattern, job.greedy_trials, job.seed).map_err(search_err)?)
    } else {
        None
    };
    let exact = if job.exact {
        Some(sat_exact(job.host, &job.pattern, SearchOptions::default()).map_err(search_err)?)
    } else {
        None
    };
    if let Some(path) = &job.out {
        let best = witness
            .as_ref()
            .or(exact.as_ref().map(|r| &r.witnesses[0]))
            .or(greedy.as_ref().map(|r| &r.witnesses[0]));
        if let Some(g) = best {
            fs::write(path, to_json(g))
                .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
        }
    }
    let [n1, n2, n3] = job.host.as_array();
    let (l, m, p) = (job.pattern.l(), job.pattern.m(), job.pattern.p());
    Ok([
        job.action.to_string(),
        cell(construction),
        cell(variant),
        l.to_string(),
        m.to_string(),
        p.to_string(),
        n1.to_string(),
        n2.to_string(),
        n3.to_string(),
        cell(edges),
        cell(formula),
        cell(greedy.map(|r| r.value)),
        cell(exact.map(|r| r.value)),
        cell(hypothesis),
    ]
    .join(","))
}

/// Runs a spec given as text and returns the CSV, LF-terminated.
pub fn run_spec(text: &str, base: &Path) -> Result<String, Failure> {
    let jobs = parse(text, base)?;
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    for job in &jobs {
        writeln!(out, "{}", execute(job)?).unwrap();
    }
    Ok(out)
}

pub fn run_file(path: &Path) -> Result<String, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    run_spec(&text, base)
}
