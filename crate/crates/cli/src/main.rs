use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use centpath::bench::{
    compare_with_oracle, oracle_check, reduce_verify_random, run_bench, BenchConfig, FileFormat,
    InstanceSpec, OracleCheckConfig,
};
use centpath::generators::{generate, GenSpec};
use centpath::graph::WEIGHT_TOLERANCE;
use centpath::io::{
    load_edge_list, load_matrix_market, write_graph, write_results, LabeledGraph, TableFormat,
};
use centpath::mdcsp::best_overall_with;
use centpath::oracle::EnumerationBudget;
use centpath::reduction::{verify_reduction, ReductionReport, Sat2Instance};
use centpath::weighted::{mdcsp_continuous_weighted, mdcsp_integer_weighted_with, IntegerOptions};
use centpath::{CentralityResult, Error, SolveOptions, Workers};

const EXIT_NO_PATH: u8 = 2;

#[derive(Parser)]
#[command(
    name = "centpath",
    version,
    about = "Most degree-central shortest paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Worker threads; 0 picks automatically, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Find the most central shortest path of a graph file.
    Solve(SolveArgs),
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
    /// Run a benchmark configuration and write a results table.
    Bench(BenchArgs),
    /// Compare the search with exhaustive enumeration on random graphs.
    OracleCheck(OracleArgs),
    /// Check the Max 2-SAT gadget equivalence exhaustively.
    ReduceVerify(ReduceArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Edge list (`u v` or `u v w` per line) or `.mtx` Matrix Market file.
    input: PathBuf,
    #[arg(long)]
    directed: bool,
    /// Use the weight column; integer weights take the subdivision route,
    /// others the all-pairs route.
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 2)]
    min_vertices: usize,
    /// Allow single-vertex paths (same as --min-vertices 1).
    #[arg(long)]
    include_singletons: bool,
    /// Print the path as one label per line after the summary.
    #[arg(long)]
    dump_path: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GenArgs {
    /// Generator spec, e.g. `ws:n=100,k=4,p=0.1`, `ba:n=100,m=2`, `uniform:n=20,p=0.3`.
    spec: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Key-value configuration file.
    config: Option<PathBuf>,
    /// Extra instance (generator spec or `file:<path>`); repeatable.
    #[arg(long = "instance")]
    instances: Vec<String>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Seed of the first repetition.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    timeout_seconds: Option<f64>,
    #[arg(long)]
    format: Option<TableFormat>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Check these graph files instead of the random corpus.
    #[arg(long = "file")]
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Random integer weights from 1 to 4, checked through the subdivision route.
    #[arg(long)]
    weighted: bool,
    /// Cap on enumerated paths per vertex pair.
    #[arg(long, default_value_t = 1_000_000)]
    max_paths: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReduceArgs {
    /// Instance in `p sat2 <vars> <clauses>` format.
    input: Option<PathBuf>,
    /// Random instances: variables, clauses, count.
    #[arg(long, num_args = 3, value_names = ["U", "C", "COUNT"])]
    random: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Gen(a) => gen(a).map(|_| ExitCode::SUCCESS),
        Command::Bench(a) => bench(a).map(|_| ExitCode::SUCCESS),
        Command::OracleCheck(a) => oracle(a),
        Command::ReduceVerify(a) => reduce(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &FsPath, directed: bool) -> Result<LabeledGraph> {
    let text = read(path)?;
    let lg = match FileFormat::from_path(path) {
        FileFormat::MatrixMarket => {
            if directed {
                bail!("Matrix Market input is read as undirected");
            }
            load_matrix_market(&text)
        }
        FileFormat::EdgeList => load_edge_list(&text, directed),
    }
    .with_context(|| format!("cannot parse {}", path.display()))?;
    for w in &lg.warnings {
        eprintln!("warning: {w}");
    }
    Ok(lg)
}

fn solve(a: SolveArgs) -> Result<ExitCode> {
    let lg = load(&a.input, a.directed)?;
    let min_vertices = if a.include_singletons {
        1
    } else {
        a.min_vertices
    };
    let workers = Workers::from_count(a.common.workers);
    let g = if a.weighted {
        lg.graph.clone()
    } else {
        lg.graph.unweighted()
    };
    let integer_weights = g.edges().iter().all(|e| e.weight.fract() == 0.0);
    let outcome = if !a.weighted {
        best_overall_with(
            &g,
            &SolveOptions {
                min_vertices,
                workers,
                ..SolveOptions::default()
            },
        )
    } else if integer_weights {
        mdcsp_integer_weighted_with(
            &g,
            &IntegerOptions {
                min_vertices,
                workers,
            },
        )
    } else {
        if min_vertices != 2 {
            bail!("--min-vertices is not supported for real-valued weights");
        }
        mdcsp_continuous_weighted(&g, WEIGHT_TOLERANCE)
    };
    match outcome {
        Ok(r) => {
            print_result(&lg, &r, a.dump_path);
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::NoPath) => {
            println!("no path");
            Ok(ExitCode::from(EXIT_NO_PATH))
        }
        Err(e) => Err(e.into()),
    }
}

fn print_result(lg: &LabeledGraph, r: &CentralityResult, dump: bool) {
    println!("centrality={} length={}", r.centrality, r.length);
    println!(
        "source={} target={}",
        lg.label(r.source),
        lg.label(r.target)
    );
    let labels: Vec<&str> = r.path.vertices().iter().map(|&v| lg.label(v)).collect();
    println!("path={}", labels.join(" "));
    if dump {
        for l in labels {
            println!("{l}");
        }
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let mut spec: GenSpec = a.spec.parse()?;
    if let Some(seed) = a.seed {
        spec = spec.with_seed(seed);
    }
    let text = format!("# {spec}\n{}", write_graph(&generate(&spec)?));
    match a.output {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => {
            let base = path.parent().unwrap_or(FsPath::new("."));
            BenchConfig::parse(&read(path)?, base)
                .with_context(|| format!("in {}", path.display()))?
        }
        None => BenchConfig::default(),
    };
    for inst in &a.instances {
        cfg.instances.push(match inst.strip_prefix("file:") {
            Some(p) => InstanceSpec::file(p),
            None => InstanceSpec::Generated(inst.parse()?),
        });
    }
    if cfg.instances.is_empty() {
        bail!("no instances: give a config file or --instance");
    }
    if let Some(r) = a.repetitions {
        cfg.repetitions = r;
    }
    if let Some(s) = a.seed {
        cfg.seed_base = s;
    }
    if let Some(t) = a.timeout_seconds {
        if !(t.is_finite() && t > 0.0) {
            bail!("timeout must be positive");
        }
        cfg.timeout = Duration::from_secs_f64(t);
    }
    if let Some(f) = a.format {
        cfg.format = f;
    }
    if let Some(o) = a.output {
        cfg.output = Some(o);
    }
    if let Some(w) = a.workers {
        cfg.workers = Workers::from_count(w);
    }
    let rows = run_bench(&cfg)?;
    let table = write_results(&rows, cfg.format);
    match &cfg.output {
        Some(path) => {
            fs::write(path, table).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<ExitCode> {
    let workers = Workers::from_count(a.common.workers);
    let budget = EnumerationBudget::new(a.max_paths, usize::MAX)?;
    if !a.files.is_empty() {
        let mut failed = false;
        for path in &a.files {
            let lg = load(path, false)?;
            let g = if a.weighted {
                lg.graph
            } else {
                lg.graph.unweighted()
            };
            match compare_with_oracle(&g, budget, workers)? {
                None => println!("{}: equal", path.display()),
                Some(detail) => {
                    failed = true;
                    println!("{}: MISMATCH {detail}", path.display());
                }
            }
        }
        return Ok(if failed {
            ExitCode::FAILURE
        } else {
            ExitCode::SUCCESS
        });
    }
    let base = if a.weighted {
        OracleCheckConfig::weighted()
    } else {
        OracleCheckConfig::default()
    };
    let cfg = OracleCheckConfig {
        count: a.count,
        seed_base: a.seed,
        max_vertices: a.max_vertices.unwrap_or(base.max_vertices),
        budget,
        workers,
        ..base
    };
    let report = oracle_check(&cfg)?;
    for m in &report.mismatches {
        println!("seed {}: MISMATCH {}", m.seed, m.detail);
    }
    for seed in &report.over_budget {
        println!("seed {seed}: enumeration budget exceeded");
    }
    println!(
        "checked {} graphs: {} mismatches, {} over budget",
        report.checked,
        report.mismatches.len(),
        report.over_budget.len()
    );
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn print_report(label: &str, r: &ReductionReport) {
    println!(
        "{label}: vars={} clauses={} max_satisfiable={} best_centrality={}",
        r.num_vars, r.num_clauses, r.max_satisfiable, r.best_centrality
    );
    println!("  k  threshold  satisfiable  path_reaches  ok");
    for row in &r.rows {
        println!(
            "{:>3}  {:>9}  {:>11}  {:>12}  {}",
            row.k,
            row.threshold,
            row.satisfiable,
            row.path_reaches,
            if row.holds() { "yes" } else { "NO" }
        );
    }
}

fn reduce(a: ReduceArgs) -> Result<ExitCode> {
    let reports = match (&a.input, &a.random) {
        (Some(path), None) => {
            let inst: Sat2Instance = read(path)?.parse()?;
            vec![(path.display().to_string(), verify_reduction(&inst)?)]
        }
        (None, Some(v)) => {
            let (u, c, count) = (v[0], v[1], v[2]);
            let workers = Workers::from_count(a.common.workers);
            reduce_verify_random(count, a.seed, |_| u, |_| c, workers)?
                .into_iter()
                .enumerate()
                .map(|(i, (_, r))| (format!("seed {}", a.seed + i as u64), r))
                .collect()
        }
        _ => bail!("give either an instance file or --random U C COUNT"),
    };
    let mut dirty = 0;
    for (label, r) in &reports {
        print_report(label, r);
        if !r.is_clean() {
            dirty += 1;
        }
    }
    println!("{} instances, {} with failures", reports.len(), dirty);
    Ok(if dirty == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
