//! `trisat`: build, verify and search saturated subgraphs of complete
//! tripartite graphs.
//!
//! Exit codes: 0 on success (or a saturated graph for `verify`), 1 when
//! `verify` refutes saturation or a search runs out of budget, 2 on any
//! usage, input or parameter error. Errors print a JSON object
//! `{"error":{"kind":..,"message":..}}` on standard output.

mod table;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use trisat::constructions::{smallest_n, Construction, ConstructionParams};
use trisat::formulas;
use trisat::graph::{parse_graph, GraphFormat};
use trisat::search::{self, SearchError, SearchOptions, EXACT_EDGE_GUARD};
use trisat::verifier::{is_saturated_with, VerifyOptions};
use trisat::{PartSizes, PatternSpec};

#[derive(Parser)]
#[command(
    name = "trisat",
    version,
    about = "Saturation numbers in complete tripartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one of the explicit saturated constructions.
    Construct(ConstructArgs),
    /// Check whether a graph file is saturated for a pattern.
    Verify(VerifyArgs),
    /// Compute or bound the saturation number of a pattern in a host.
    Sat(SatArgs),
    /// Evaluate a closed-form bound.
    Formula(FormulaArgs),
    /// Run an experiment spec and write a CSV table.
    Table(TableArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// 1, 2, 3, 4, 5 or c4; `2.i` selects a variant directly.
    #[arg(long)]
    construction: Construction,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Defaults to m for constructions 1, 2 and 4.
    #[arg(long)]
    p: Option<usize>,
    /// Variant of construction 2.
    #[arg(long)]
    variant: Option<usize>,
    /// Part sizes N1,N2,N3; defaults to the smallest valid balanced host.
    #[arg(long, value_parser = parse_sizes)]
    n: Option<[usize; 3]>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Build even when the saturation guarantee does not apply.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Host sizes N1,N2,N3; defaults to the graph's own part sizes.
    #[arg(long, value_parser = parse_sizes)]
    host: Option<[usize; 3]>,
    #[arg(long)]
    pattern: PatternSpec,
    /// Stop at the first nonedge that completes no copy.
    #[arg(long)]
    early_exit: bool,
}

#[derive(Args)]
struct SatArgs {
    #[arg(long, value_parser = parse_sizes)]
    host: [usize; 3],
    #[arg(long)]
    pattern: PatternSpec,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Node budget for the exact search.
    #[arg(long)]
    budget: Option<u64>,
    /// Largest host edge count the exact search accepts.
    #[arg(long, default_value_t = EXACT_EDGE_GUARD)]
    edge_guard: usize,
    /// Return every optimum up to isomorphism (exact method only).
    #[arg(long, requires = "out_dir")]
    enumerate: bool,
    /// Directory for the numbered witness files written by --enumerate.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; overrides TRISAT_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long)]
    name: String,
    /// Comma-separated `key=value` pairs.
    #[arg(long, value_parser = parse_params)]
    params: BTreeMap<String, u64>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    spec: PathBuf,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Edges,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => GraphFormat::Json,
            Format::Edges => GraphFormat::Edges,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Exhaustive,
    Greedy,
}

/// An error that ends the process with exit code 2.
#[derive(Debug)]
pub struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    pub fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }
}

fn parse_sizes(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected N1,N2,N3, got `{s}`"));
    }
    let mut out = [0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("`{p}` is not a part size"))?;
    }
    Ok(out)
}

fn parse_params(s: &str) -> Result<BTreeMap<String, u64>, String> {
    let mut out = BTreeMap::new();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
        let v = v
            .trim()
            .parse()
            .map_err(|_| format!("`{v}` is not a non-negative integer"))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(format!("parameter `{}` given twice", k.trim()));
        }
    }
    Ok(out)
}

pub fn part_sizes(n: [usize; 3]) -> Result<PartSizes, Failure> {
    PartSizes::new(n[0], n[1], n[2]).map_err(|e| Failure::new("invalid_sizes", e))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new("io", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

/// Resolves the construction kind, pattern and host from the flags.
pub fn construction_params(
    which: Construction,
    variant: Option<usize>,
    l: Option<usize>,
    m: Option<usize>,
    p: Option<usize>,
    n: Option<[usize; 3]>,
) -> Result<ConstructionParams, Failure> {
    let which = match (which, variant) {
        (w, None) => w,
        (Construction::C2(_), Some(i)) => Construction::C2(i),
        (w, Some(_)) => {
            return Err(Failure::new(
                "invalid_parameters",
                format!("construction {w} has no variants"),
            ))
        }
    };
    let (l, m, p) = match which {
        Construction::C4Cycle => (l.unwrap_or(2), m.unwrap_or(2), p.unwrap_or(0)),
        _ => {
            let need = |x: Option<usize>, name: &str| {
                x.ok_or_else(|| {
                    Failure::new(
                        "invalid_parameters",
                        format!("construction {which} needs --{name}"),
                    )
                })
            };
            let (l, m) = (need(l, "l")?, need(m, "m")?);
            let p = match which {
                Construction::C3 | Construction::C5 => need(p, "p")?,
                _ => p.unwrap_or(m),
            };
            (l, m, p)
        }
    };
    let n = match n {
        Some(n) => n,
        None => [smallest_n(which, l, m, p).map_err(|e| Failure::new("invalid_parameters", e))?; 3],
    };
    Ok(ConstructionParams::new(which, l, m, p, n))
}

fn construct(a: ConstructArgs) -> Result<ExitCode, Failure> {
    let params = construction_params(a.construction, a.variant, a.l, a.m, a.p, a.n)?;
    let g = params
        .build(a.force)
        .map_err(|e| Failure::new("invalid_parameters", e))?;
    let formula = params.formula().ok().map(|f| f.value);
    let edges = g.edge_count();
    eprintln!(
        "edges={edges} formula={} match={}",
        formula.map_or("NA".to_string(), |f| f.to_string()),
        formula == Some(edges as i128)
    );
    write_or_print(a.out.as_deref(), &GraphFormat::from(a.format).write(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(&a.graph)
        .map_err(|e| Failure::new("io", format!("{}: {e}", a.graph.display())))?;
    let g = parse_graph(&text)
        .map_err(|e| Failure::new("parse", format!("{}: {e}", a.graph.display())))?;
    let host = match a.host {
        Some(h) => part_sizes(h)?,
        None => g.sizes(),
    };
    let report = is_saturated_with(
        &g,
        host,
        &a.pattern,
        VerifyOptions {
            early_exit: a.early_exit,
        },
    )
    .map_err(|e| Failure::new("size_mismatch", e))?;
    print_json(&report);
    Ok(if report.is_saturated {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn sat(a: SatArgs) -> Result<ExitCode, Failure> {
    let host = part_sizes(a.host)?;
    let opts = SearchOptions {
        node_budget: a.budget,
        edge_guard: a.edge_guard,
        threads: a.threads,
    };
    if a.enumerate && !matches!(a.method, MethodArg::Exact) {
        return Err(Failure::new("usage", "--enumerate requires --method exact"));
    }
    let result = match a.method {
        MethodArg::Exact if a.enumerate => search::enumerate_optima(host, &a.pattern, opts),
        MethodArg::Exact => search::sat_exact(host, &a.pattern, opts),
        MethodArg::Exhaustive => search::sat_exhaustive_with(host, &a.pattern, a.threads),
        MethodArg::Greedy => search::sat_greedy_with(host, &a.pattern, a.trials, a.seed, a.threads),
    };
    let result = match result {
        Ok(r) => r,
        Err(SearchError::Inconclusive {
            budget,
            best_value,
            best,
            nodes_explored,
        }) => {
            print_json(&json!({
                "status": "inconclusive",
                "budget": budget,
                "best_value": best_value,
                "best": best,
                "nodes_explored": nodes_explored,
            }));
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(Failure::new("search", e)),
    };
    if let Some(dir) = a.out_dir.as_deref().filter(|_| a.enumerate) {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::new("io", format!("{}: {e}", dir.display())))?;
        let ext = match a.format {
            Format::Json => "json",
            Format::Edges => "txt",
        };
        for (i, w) in result.witnesses.iter().enumerate() {
            let path = dir.join(format!("witness_{:03}.{ext}", i + 1));
            write_or_print(Some(&path), &GraphFormat::from(a.format).write(w))?;
        }
    }
    print_json(&result);
    Ok(ExitCode::SUCCESS)
}

fn formula(a: FormulaArgs) -> Result<ExitCode, Failure> {
    let record = formulas::evaluate(&a.name, &a.params).map_err(|e| Failure::new("formula", e))?;
    print_json(&record);
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Sat(a) => sat(a),
        Command::Formula(a) => formula(a),
        Command::Table(a) => {
            let csv = table::run_file(&a.spec)?;
            write_or_print(a.out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn fail(f: Failure) -> ExitCode {
    println!(
        "{}",
        json!({ "error": { "kind": f.kind, "message": f.message } })
    );
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return fail(Failure::new("usage", e.kind()));
        }
    };
    run(cli).unwrap_or_else(fail)
}
