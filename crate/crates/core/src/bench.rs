//! Experiment drivers: benchmark tables, the randomized oracle comparison and
//! batch reduction checks.

use std::path::{Path as FsPath, PathBuf};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::generators::{generate, GenSpec, SeededRng};
use crate::graph::{stats, Graph};
use crate::io::{load_edge_list, load_matrix_market, ResultRow, RowKind, RowStatus, TableFormat};
use crate::mdcsp::{analyze_until, single_source, CentralityResult, SolveOptions};
use crate::oracle::{brute_force_best, per_target_best, EnumerationBudget, OracleOptions};
use crate::par::{self, Workers};
use crate::reduction::{verify_reduction, ReductionReport, Sat2Instance};
use crate::weighted::{mdcsp_integer_weighted_with, IntegerOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    EdgeList,
    MatrixMarket,
}

impl FileFormat {
    /// `.mtx` files are Matrix Market, anything else an edge list.
    pub fn from_path(path: &FsPath) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => FileFormat::MatrixMarket,
            _ => FileFormat::EdgeList,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    Generated(GenSpec),
    File {
        name: String,
        path: PathBuf,
        format: FileFormat,
    },
}

impl InstanceSpec {
    pub fn file(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let format = FileFormat::from_path(&path);
        InstanceSpec::File { name, path, format }
    }
}

pub fn load_graph_file(path: &FsPath, format: FileFormat) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    let lg = match format {
        FileFormat::EdgeList => load_edge_list(&text, false)?,
        FileFormat::MatrixMarket => load_matrix_market(&text)?,
    };
    Ok(lg.graph)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub instances: Vec<InstanceSpec>,
    /// Runs per generated setting; files run once.
    pub repetitions: usize,
    /// Run `i` of a generated setting uses seed `seed_base + i`.
    pub seed_base: u64,
    pub workers: Workers,
    pub timeout: Duration,
    pub format: TableFormat,
    pub output: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            instances: Vec::new(),
            repetitions: 30,
            seed_base: 0,
            workers: Workers::Auto,
            timeout: Duration::from_secs(600),
            format: TableFormat::Csv,
            output: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidSpec("repetitions must be at least 1".into()));
        }
        if self.timeout.is_zero() {
            return Err(Error::InvalidSpec("timeout must be positive".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. Keys: `instance`
    /// (repeatable; a generator spec such as `ws:n=100,k=4,p=0.1`, or
    /// `file:<path>`), `repetitions`, `seed_base`, `workers`,
    /// `timeout_seconds`, `format`, `output`. Relative paths are taken
    /// relative to `base_dir`.
    pub fn parse(text: &str, base_dir: &FsPath) -> Result<Self> {
        let mut cfg = BenchConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let value = value.trim();
            let number = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| err(format!("bad number `{v}`")))
            };
            match key.trim() {
                "instance" => {
                    let spec = match value.strip_prefix("file:") {
                        Some(p) => InstanceSpec::file(base_dir.join(p.trim())),
                        None => InstanceSpec::Generated(value.parse()?),
                    };
                    cfg.instances.push(spec);
                }
                "repetitions" => cfg.repetitions = number(value)? as usize,
                "seed_base" => cfg.seed_base = number(value)?,
                "workers" => cfg.workers = Workers::from_count(number(value)? as usize),
                "timeout_seconds" => {
                    let secs: f64 = value
                        .parse()
                        .map_err(|_| err(format!("bad timeout `{value}`")))?;
                    if !(secs.is_finite() && secs > 0.0) {
                        return Err(err("timeout must be positive".into()));
                    }
                    cfg.timeout = Duration::from_secs_f64(secs);
                }
                "format" => cfg.format = value.parse()?,
                "output" => cfg.output = Some(base_dir.join(value)),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Solves one graph and fills a result row; `runtime_seconds` covers the
/// all-sources search only.
pub fn measure(
    g: &Graph,
    instance: String,
    seed: Option<u64>,
    workers: Workers,
    timeout: Duration,
) -> ResultRow {
    let st = stats(g);
    let mut row = ResultRow {
        instance,
        kind: RowKind::Instance,
        vertex_count: st.vertex_count as f64,
        edge_count: st.edge_count as f64,
        max_degree: st.max_degree as f64,
        seed,
        ..Default::default()
    };
    let opts = SolveOptions {
        workers,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let outcome = analyze_until(g, &opts, Some(start + timeout));
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(a) => {
            row.diameter = Some(a.diameter as f64);
            row.diam_centrality = Some(a.at_diameter.centrality as f64);
            row.path_length = Some(a.overall.length as f64);
            row.path_centrality = Some(a.overall.centrality as f64);
            row.runtime_seconds = Some(elapsed);
        }
        Err(Error::Timeout) => row.status = RowStatus::Timeout,
        Err(Error::NoPath) => {
            row.status = RowStatus::NoPath;
            row.runtime_seconds = Some(elapsed);
        }
        Err(e) => row.status = RowStatus::Error(e.to_string()),
    }
    row
}

/// Arithmetic mean of the solved rows; `None` when no row is given.
pub fn mean_row(setting: &str, rows: &[ResultRow]) -> Option<ResultRow> {
    if rows.is_empty() {
        return None;
    }
    let mean = |f: &dyn Fn(&ResultRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
    let solved: Vec<&ResultRow> = rows.iter().filter(|r| r.status == RowStatus::Ok).collect();
    let solved_mean = |f: &dyn Fn(&ResultRow) -> Option<f64>| {
        (!solved.is_empty())
            .then(|| solved.iter().map(|r| f(r).unwrap_or(0.0)).sum::<f64>() / solved.len() as f64)
    };
    let status = if solved.len() == rows.len() {
        RowStatus::Ok
    } else {
        RowStatus::Error(format!("solved {}/{}", solved.len(), rows.len()))
    };
    Some(ResultRow {
        instance: setting.to_string(),
        kind: RowKind::Mean,
        vertex_count: mean(&|r| r.vertex_count),
        edge_count: mean(&|r| r.edge_count),
        max_degree: mean(&|r| r.max_degree),
        diameter: solved_mean(&|r| r.diameter),
        diam_centrality: solved_mean(&|r| r.diam_centrality),
        path_length: solved_mean(&|r| r.path_length),
        path_centrality: solved_mean(&|r| r.path_centrality),
        runtime_seconds: solved_mean(&|r| r.runtime_seconds),
        seed: None,
        status,
    })
}

/// Runs every instance of the configuration. Generated settings produce one
/// row per repetition followed by their mean row. A file that cannot be read
/// yields an error row and the run continues.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for spec in &cfg.instances {
        match spec {
            InstanceSpec::Generated(gen) => {
                let mut setting_rows = Vec::with_capacity(cfg.repetitions);
                for i in 0..cfg.repetitions {
                    let seeded = gen.with_seed(cfg.seed_base + i as u64);
                    let g = generate(&seeded)?;
                    setting_rows.push(measure(
                        &g,
                        seeded.to_string(),
                        Some(seeded.seed),
                        cfg.workers,
                        cfg.timeout,
                    ));
                }
                let mean = mean_row(&gen.setting(), &setting_rows);
                rows.extend(setting_rows);
                rows.extend(mean);
            }
            InstanceSpec::File { name, path, format } => match load_graph_file(path, *format) {
                Ok(g) => rows.push(measure(&g, name.clone(), None, cfg.workers, cfg.timeout)),
                Err(e) => rows.push(ResultRow {
                    instance: name.clone(),
                    status: RowStatus::Error(e.to_string()),
                    ..Default::default()
                }),
            },
        }
    }
    Ok(rows)
}

/// Random corpus for engine-versus-oracle comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheckConfig {
    pub count: usize,
    pub seed_base: u64,
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Edge probabilities, used in rotation.
    pub edge_probs: Vec<f64>,
    /// Integer weights drawn from `1..=max_weight`; `None` for unweighted.
    pub max_weight: Option<usize>,
    pub budget: EnumerationBudget,
    pub workers: Workers,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        Self {
            count: 200,
            seed_base: 0,
            min_vertices: 4,
            max_vertices: 30,
            edge_probs: vec![0.15, 0.3, 0.6],
            max_weight: None,
            budget: EnumerationBudget::default(),
            workers: Workers::Auto,
        }
    }
}

impl OracleCheckConfig {
    /// The integer-weight corpus: 100 graphs, at most 12 vertices, weights 1 to 4.
    pub fn weighted() -> Self {
        Self {
            count: 100,
            min_vertices: 3,
            max_vertices: 12,
            edge_probs: vec![0.25, 0.4, 0.6],
            max_weight: Some(4),
            ..Self::default()
        }
    }

    /// Graph `i` of the corpus together with its seed.
    pub fn instance(&self, i: usize) -> Result<(Graph, u64)> {
        if self.min_vertices > self.max_vertices || self.edge_probs.is_empty() {
            return Err(Error::InvalidSpec("empty oracle corpus".into()));
        }
        let seed = self.seed_base + i as u64;
        let mut rng = SeededRng::new(seed);
        let n = self.min_vertices + rng.below(self.max_vertices - self.min_vertices + 1);
        let p = self.edge_probs[i % self.edge_probs.len()];
        let g = generate(&GenSpec::uniform_random(n, p, seed))?;
        let g = match self.max_weight {
            None => g,
            Some(w) => {
                let weighted: Vec<_> = g
                    .edges()
                    .iter()
                    .map(|e| (e.u, e.v, (1 + rng.below(w)) as f64))
                    .collect();
                Graph::weighted(n, weighted, false)?
            }
        };
        Ok((g, seed))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Seeds whose enumeration ran over budget.
    pub over_budget: Vec<u64>,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.over_budget.is_empty()
    }
}

/// Compares the engine's answer with exhaustive enumeration on one graph.
/// Unweighted graphs are also compared target by target from every source.
pub fn compare_with_oracle(
    g: &Graph,
    budget: EnumerationBudget,
    workers: Workers,
) -> Result<Option<String>> {
    let opts = OracleOptions {
        budget,
        ..OracleOptions::default()
    };
    let oracle = match brute_force_best(g, &opts) {
        Ok(r) => Some(r),
        Err(Error::NoPath) => None,
        Err(e) => return Err(e),
    };
    let engine = if g.is_weighted() {
        mdcsp_integer_weighted_with(
            g,
            &IntegerOptions {
                workers,
                ..IntegerOptions::default()
            },
        )
    } else {
        crate::mdcsp::best_overall_with(
            g,
            &SolveOptions {
                workers,
                ..SolveOptions::default()
            },
        )
    };
    let engine = match engine {
        Ok(r) => Some(r),
        Err(Error::NoPath) => None,
        Err(e) => return Err(e),
    };
    if let Some(problem) = overall_mismatch(g, engine.as_ref(), oracle.as_ref()) {
        return Ok(Some(problem));
    }
    if !g.is_weighted() {
        for s in 0..g.vertex_count() {
            let state = single_source(g, s)?;
            let expected = per_target_best(g, s, &opts)?;
            for (v, want) in expected.iter().enumerate() {
                let got = state.centrality(v);
                if got != want.as_ref().map(|r| r.centrality) {
                    return Ok(Some(format!(
                        "source {s} target {v}: engine {got:?}, oracle {:?}",
                        want.as_ref().map(|r| r.centrality)
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn overall_mismatch(
    g: &Graph,
    engine: Option<&CentralityResult>,
    oracle: Option<&CentralityResult>,
) -> Option<String> {
    match (engine, oracle) {
        (None, None) => None,
        (Some(e), Some(o)) => {
            if e.centrality != o.centrality {
                return Some(format!(
                    "engine {} via {:?}, oracle {} via {:?}",
                    e.centrality, e.path, o.centrality, o.path
                ));
            }
            match (g.is_shortest_path(&e.path), g.centrality(&e.path)) {
                (Ok(true), Ok(c)) if c == e.centrality => None,
                _ => Some(format!(
                    "engine path {:?} is not a shortest path of centrality {}",
                    e.path, e.centrality
                )),
            }
        }
        (e, o) => Some(format!("engine {e:?}, oracle {o:?}")),
    }
}

pub fn oracle_check(cfg: &OracleCheckConfig) -> Result<OracleReport> {
    let mut report = OracleReport::default();
    for i in 0..cfg.count {
        let (g, seed) = cfg.instance(i)?;
        report.checked += 1;
        match compare_with_oracle(&g, cfg.budget, cfg.workers) {
            Ok(None) => {}
            Ok(Some(detail)) => report.mismatches.push(Mismatch { seed, detail }),
            Err(Error::BudgetExceeded { .. }) => report.over_budget.push(seed),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Verifies `count` random instances; instance `i` uses seed `seed_base + i`
/// and `num_clauses(i)` clauses over `num_vars(i)` variables.
pub fn reduce_verify_random(
    count: usize,
    seed_base: u64,
    num_vars: impl Fn(usize) -> usize + Sync + Send,
    num_clauses: impl Fn(usize) -> usize + Sync + Send,
    workers: Workers,
) -> Result<Vec<(Sat2Instance, ReductionReport)>> {
    let mut out = par::map_reduce(
        count,
        workers,
        || Ok(Vec::new()),
        |i| -> Result<Vec<(usize, Sat2Instance, ReductionReport)>> {
            let inst = Sat2Instance::random(num_vars(i), num_clauses(i), seed_base + i as u64)?;
            let report = verify_reduction(&inst)?;
            Ok(vec![(i, inst, report)])
        },
        |a, b| {
            let mut a = a?;
            a.extend(b?);
            Ok(a)
        },
    )?;
    out.sort_by_key(|(i, _, _)| *i);
    Ok(out.into_iter().map(|(_, inst, r)| (inst, r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let text = "# demo\nrepetitions = 3\nseed_base = 10\nworkers = 1\ntimeout_seconds = 2.5\n\
                    format = markdown\ninstance = ws:n=20,k=4,p=0.1\ninstance = file:g.txt # note\n";
        let cfg = BenchConfig::parse(text, FsPath::new("/data")).unwrap();
        assert_eq!(cfg.repetitions, 3);
        assert_eq!(cfg.seed_base, 10);
        assert_eq!(cfg.workers, Workers::Sequential);
        assert_eq!(cfg.timeout, Duration::from_millis(2500));
        assert_eq!(cfg.format, TableFormat::Markdown);
        assert_eq!(cfg.instances.len(), 2);
        assert_eq!(cfg.instances[1], InstanceSpec::file("/data/g.txt"));
        assert!(BenchConfig::parse("repetitions = 0\n", FsPath::new(".")).is_err());
        assert!(BenchConfig::parse("timeout_seconds = 0\n", FsPath::new(".")).is_err());
        assert!(BenchConfig::parse("colour = blue\n", FsPath::new(".")).is_err());
    }

    #[test]
    fn bench_rows_and_means() {
        let cfg = BenchConfig {
            instances: vec![InstanceSpec::Generated(GenSpec::barabasi_albert(30, 2, 0))],
            repetitions: 3,
            seed_base: 5,
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].seed, Some(5));
        assert_eq!(rows[2].seed, Some(7));
        let mean = &rows[3];
        assert_eq!(mean.kind, RowKind::Mean);
        assert_eq!(mean.edge_count, 56.0);
        let avg = rows[..3]
            .iter()
            .map(|r| r.path_centrality.unwrap())
            .sum::<f64>()
            / 3.0;
        assert_eq!(mean.path_centrality, Some(avg));
    }

    #[test]
    fn missing_file_is_an_error_row() {
        let cfg = BenchConfig {
            instances: vec![InstanceSpec::file("/nonexistent/graph.txt")],
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert!(matches!(rows[0].status, RowStatus::Error(_)));
    }

    #[test]
    fn tiny_timeout_is_recorded() {
        let g = generate(&GenSpec::watts_strogatz(400, 4, 0.1, 0)).unwrap();
        let row = measure(
            &g,
            "ws".into(),
            None,
            Workers::Sequential,
            Duration::from_nanos(1),
        );
        assert_eq!(row.status, RowStatus::Timeout);
        assert_eq!(row.edge_count, 800.0);
    }

    #[test]
    fn small_oracle_run() {
        let cfg = OracleCheckConfig {
            count: 10,
            max_vertices: 10,
            ..OracleCheckConfig::default()
        };
        let report = oracle_check(&cfg).unwrap();
        assert_eq!(report.checked, 10);
        assert!(report.is_clean(), "{report:?}");
        let weighted = OracleCheckConfig {
            count: 10,
            ..OracleCheckConfig::weighted()
        };
        assert!(oracle_check(&weighted).unwrap().is_clean());
    }

    #[test]
    fn random_reductions() {
        let out = reduce_verify_random(6, 0, |_| 2, |i| i, Workers::Sequential).unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(|(_, r)| r.is_clean()));
        assert_eq!(out[4].0.clauses.len(), 4);
    }
}
