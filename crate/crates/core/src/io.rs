//! Edge-list and Matrix Market readers, edge-list writer, and result tables.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph whose dense ids map back to the labels used in the source file.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// `labels[id]` is the label read for vertex `id`.
    pub labels: Vec<String>,
    /// Lines that were accepted with a change (duplicates, self-loops).
    pub warnings: Vec<String>,
}

impl LabeledGraph {
    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

/// Reads `u v` or `u v w` lines; `#` and `%` start comment lines. Labels are
/// arbitrary tokens numbered in order of first appearance. Repeated edges
/// and self-loops are dropped with a warning. Either every edge line carries
/// a weight or none does.
pub fn load_edge_list(text: &str, directed: bool) -> Result<LabeledGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut warnings = Vec::new();
    let mut seen: HashMap<(usize, usize), f64> = HashMap::new();
    let mut edges = Vec::new();
    let mut weighted: Option<bool> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(
                line_no,
                format!("expected `u v` or `u v w`, got `{line}`"),
            ));
        }
        let has_weight = fields.len() == 3;
        match weighted {
            None => weighted = Some(has_weight),
            Some(w) if w != has_weight => {
                return Err(parse_err(line_no, "mix of weighted and unweighted lines"));
            }
            _ => {}
        }
        let weight = if has_weight {
            let w: f64 = fields[2]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad weight `{}`", fields[2])))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(parse_err(line_no, format!("weight {w} must be positive")));
            }
            w
        } else {
            1.0
        };
        let mut id = |label: &str| match ids.entry(label.to_string()) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                labels.push(label.to_string());
                *e.insert(labels.len() - 1)
            }
        };
        let (u, v) = (id(fields[0]), id(fields[1]));
        if u == v {
            warnings.push(format!(
                "line {line_no}: self-loop on `{}` dropped",
                fields[0]
            ));
            continue;
        }
        let key = if directed {
            (u, v)
        } else {
            (u.min(v), u.max(v))
        };
        match seen.entry(key) {
            Entry::Occupied(e) => {
                let note = if *e.get() != weight {
                    " with a different weight"
                } else {
                    ""
                };
                warnings.push(format!(
                    "line {line_no}: repeated edge `{} {}`{note} dropped",
                    fields[0], fields[1]
                ));
            }
            Entry::Vacant(e) => {
                e.insert(weight);
                edges.push((u, v, weight));
            }
        }
    }

    let n = labels.len();
    let graph = if weighted == Some(true) {
        Graph::weighted(n, edges, directed)?
    } else {
        Graph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)), directed)?
    };
    Ok(LabeledGraph {
        graph,
        labels,
        warnings,
    })
}

/// Reads a coordinate-format Matrix Market file as an undirected, unweighted
/// graph. Entry values are ignored. Indices are one-based in the file and the
/// label of vertex `i` is `i + 1`. Diagonal entries and the mirrored copy of
/// an entry (in `general` files) are dropped with a warning.
pub fn load_matrix_market(text: &str) -> Result<LabeledGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let head: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if head.len() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
        return Err(parse_err(1, "expected `%%MatrixMarket matrix ...` header"));
    }
    if head[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format `{}`", head[2])));
    }
    if !["pattern", "real", "integer"].contains(&head[3].as_str()) {
        return Err(parse_err(1, format!("unsupported field `{}`", head[3])));
    }
    if !["symmetric", "general"].contains(&head[4].as_str()) {
        return Err(parse_err(1, format!("unsupported symmetry `{}`", head[4])));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut warnings = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let mut entries = 0;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("bad integer `{s}`")))
        };
        let Some((rows, cols, _)) = size else {
            if fields.len() != 3 {
                return Err(parse_err(line_no, "expected `rows cols entries`"));
            }
            let (r, c, nnz) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            if r != c {
                return Err(parse_err(line_no, format!("matrix is {r}x{c}, not square")));
            }
            size = Some((r, c, nnz));
            continue;
        };
        if fields.len() < 2 {
            return Err(parse_err(line_no, "expected `row col [value]`"));
        }
        let (i, j) = (num(fields[0])?, num(fields[1])?);
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(parse_err(
                line_no,
                format!("entry ({i}, {j}) outside {rows}x{cols}"),
            ));
        }
        entries += 1;
        if i == j {
            warnings.push(format!("line {line_no}: diagonal entry ({i}, {i}) dropped"));
            continue;
        }
        let (u, v) = (i.min(j) - 1, i.max(j) - 1);
        if seen.insert((u, v)) {
            edges.push((u, v));
        } else {
            warnings.push(format!("line {line_no}: repeated entry ({i}, {j}) dropped"));
        }
    }
    let (n, _, nnz) = size.ok_or_else(|| parse_err(0, "missing size line"))?;
    if entries != nnz {
        return Err(parse_err(
            0,
            format!("size line declares {nnz} entries, found {entries}"),
        ));
    }
    let graph = Graph::new(n, edges, false)?;
    let labels = (1..=n).map(|i| i.to_string()).collect();
    Ok(LabeledGraph {
        graph,
        labels,
        warnings,
    })
}

/// One line per edge using the stored labels, weights included for weighted
/// graphs. Reading the output back yields the same labeled edge set.
pub fn write_edge_list(lg: &LabeledGraph) -> String {
    let mut out = String::new();
    for e in lg.graph.edges() {
        let (u, v) = (lg.label(e.u), lg.label(e.v));
        if lg.graph.is_weighted() {
            let _ = writeln!(out, "{u} {v} {}", e.weight);
        } else {
            let _ = writeln!(out, "{u} {v}");
        }
    }
    out
}

/// Edge list of a graph labeled by its own ids.
pub fn write_graph(g: &Graph) -> String {
    let lg = LabeledGraph {
        graph: g.clone(),
        labels: (0..g.vertex_count()).map(|i| i.to_string()).collect(),
        warnings: Vec::new(),
    };
    write_edge_list(&lg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowKind {
    #[default]
    Instance,
    /// Arithmetic mean over the instance rows of one setting.
    Mean,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum RowStatus {
    #[default]
    Ok,
    NoPath,
    Timeout,
    Error(String),
}

impl RowStatus {
    pub fn as_str(&self) -> &str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NoPath => "no_path",
            RowStatus::Timeout => "timeout",
            RowStatus::Error(e) => e,
        }
    }
}

/// One result line. Solver columns are empty when the solve did not finish.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultRow {
    pub instance: String,
    pub kind: RowKind,
    pub vertex_count: f64,
    pub edge_count: f64,
    pub max_degree: f64,
    pub diameter: Option<f64>,
    pub diam_centrality: Option<f64>,
    pub path_length: Option<f64>,
    pub path_centrality: Option<f64>,
    pub runtime_seconds: Option<f64>,
    pub seed: Option<u64>,
    pub status: RowStatus,
}

pub const RESULT_COLUMNS: [&str; 11] = [
    "instance",
    "V",
    "E",
    "max_degree",
    "diam",
    "diam_centrality",
    "path_length",
    "path_centrality",
    "runtime_seconds",
    "seed",
    "status",
];

/// Index of the runtime column in [`RESULT_COLUMNS`].
pub const RUNTIME_COLUMN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Markdown,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            _ => Err(Error::InvalidSpec(format!(
                "unknown format `{s}` (csv or markdown)"
            ))),
        }
    }
}

impl ResultRow {
    /// Cells in [`RESULT_COLUMNS`] order. Instance rows print counts as
    /// integers, mean rows print two decimals; runtimes get six.
    pub fn cells(&self) -> Vec<String> {
        let num = |x: f64| match self.kind {
            RowKind::Instance => format!("{}", x.round() as i64),
            RowKind::Mean => format!("{x:.2}"),
        };
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        vec![
            self.instance.clone(),
            num(self.vertex_count),
            num(self.edge_count),
            num(self.max_degree),
            opt(self.diameter),
            opt(self.diam_centrality),
            opt(self.path_length),
            opt(self.path_centrality),
            self.runtime_seconds
                .map(|t| format!("{t:.6}"))
                .unwrap_or_default(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.status.as_str().to_string(),
        ]
    }
}

pub fn write_results(rows: &[ResultRow], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(RESULT_COLUMNS).expect("in-memory write");
            for row in rows {
                w.write_record(row.cells()).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv output is utf-8")
        }
        TableFormat::Markdown => {
            let mut out = String::new();
            let _ = writeln!(out, "| {} |", RESULT_COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(RESULT_COLUMNS.len()));
            for row in rows {
                let cells: Vec<String> =
                    row.cells().iter().map(|c| c.replace('|', "\\|")).collect();
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
            out
        }
    }
}

/// Parses CSV produced by [`write_results`] back into string cells, header excluded.
pub fn read_result_cells(text: &str) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?;
    if header.iter().ne(RESULT_COLUMNS) {
        return Err(parse_err(1, "unexpected header"));
    }
    reader
        .records()
        .enumerate()
        .map(|(i, r)| {
            r.map(|rec| rec.iter().map(str::to_string).collect())
                .map_err(|e| parse_err(i + 2, e.to_string()))
        })
        .collect()
}
