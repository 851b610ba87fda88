//! Most degree-central shortest paths in undirected unit-weight graphs.
//!
//! The search from a source `s` is a breadth-first sweep (a FIFO queue pops
//! states in nondecreasing distance) that records, for every vertex `v`, the
//! set `preds[v]` of vertices that can directly precede `v` on a shortest
//! `s -> v` path, and builds candidate paths `<P, u, v>` by extending a stored
//! best path `P` that ends at some `w` in `preds[u]`.
//!
//! Two recurrences are available:
//!
//! * [`Recurrence::LastEdge`] (default) stores one best path per shortest-path
//!   DAG arc `(u, v)`. Along a shortest path every vertex sits on its own BFS
//!   layer, so a neighbor of the newly appended `v` can only already be covered
//!   by `v`'s two predecessors on the path. The centrality gain of appending
//!   `v` after `(w, u)` is therefore `|adj(v) \ (adj(w) ∪ adj(u) ∪ {w, u})| - 1`,
//!   a function of the last three vertices only, which makes the arc-keyed
//!   recurrence exact.
//! * [`Recurrence::LastVertex`] stores one best path per vertex and extends
//!   `P_w` for every `w` in `preds[u]`. It is cheaper in memory but not exact:
//!   the best path to `w` may cover neighbors of `u` that a weaker path to `w`
//!   leaves uncovered. See `tests::counterexample_graph`.
//!
//! Ties never replace the incumbent.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Graph, NeighborRule, Path, UNREACHABLE};
use crate::par::{self, Workers};
use crate::vertex_set::VertexSet;

const NONE: usize = usize::MAX;
const UNSET: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recurrence {
    #[default]
    LastEdge,
    LastVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Smallest number of vertices a reported path may have. `1` admits single vertices.
    pub min_vertices: usize,
    pub recurrence: Recurrence,
    pub workers: Workers,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            recurrence: Recurrence::default(),
            workers: Workers::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralityResult {
    pub path: Path,
    pub centrality: usize,
    pub source: usize,
    pub target: usize,
    /// Edge count of `path`.
    pub length: usize,
}

impl CentralityResult {
    pub fn new(path: Path, centrality: usize) -> Self {
        Self {
            source: path.first(),
            target: path.last(),
            length: path.edge_count(),
            path,
            centrality,
        }
    }

    /// Total order used for every tie-break: higher centrality, then shorter
    /// length, then smaller `(source, target, path)`. `Less` means preferred.
    pub fn rank(&self, other: &Self) -> Ordering {
        other
            .centrality
            .cmp(&self.centrality)
            .then(self.length.cmp(&other.length))
            .then(self.source.cmp(&other.source))
            .then(self.target.cmp(&other.target))
            .then_with(|| self.path.cmp(&other.path))
    }
}

pub(crate) fn pick(
    a: Option<CentralityResult>,
    b: Option<CentralityResult>,
) -> Option<CentralityResult> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.rank(&a) == Ordering::Less { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Per-source output of the search.
#[derive(Debug, Clone)]
pub struct SourceSearchState {
    pub source: usize,
    dist: Vec<usize>,
    preds: Vec<Vec<usize>>,
    paths: Vec<Option<Path>>,
    centralities: Vec<Option<usize>>,
}

impl SourceSearchState {
    pub fn distance(&self, v: usize) -> Option<usize> {
        (self.dist[v] != UNREACHABLE).then_some(self.dist[v])
    }

    /// Vertices that can directly precede `v` on a shortest path from the source.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.preds[v]
    }

    /// Most central shortest path from the source to `v`, if `v` is reachable.
    pub fn path(&self, v: usize) -> Option<&Path> {
        self.paths[v].as_ref()
    }

    pub fn centrality(&self, v: usize) -> Option<usize> {
        self.centralities[v]
    }

    pub fn members(&self, v: usize) -> Option<VertexSet> {
        let n = self.dist.len();
        self.path(v)
            .map(|p| VertexSet::from_iter_in(n, p.vertices().iter().copied()))
    }

    /// Neighborhood of the stored path to `v`, recomputed from the graph.
    pub fn neighborhood(&self, g: &Graph, v: usize) -> Option<VertexSet> {
        self.path(v)
            .map(|p| g.neighborhood_unchecked(p.vertices(), NeighborRule::Out))
    }

    pub fn vertex_count(&self) -> usize {
        self.dist.len()
    }
}

/// Neighborhood and member set of `<P, u, v>`, given those of `P`.
///
/// `u` must be adjacent to the last vertex of `P` and `v` adjacent to `u`.
pub fn extend(
    g: &Graph,
    neighborhood: &VertexSet,
    members: &VertexSet,
    u: usize,
    v: usize,
) -> (VertexSet, VertexSet) {
    let mut next = neighborhood.clone();
    for &x in g.neighbors(u).iter().chain(g.neighbors(v)) {
        next.insert(x);
    }
    let mut path_members = members.clone();
    path_members.insert(u);
    path_members.insert(v);
    next.difference_with(&path_members);
    (next, path_members)
}

fn check_input(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(Error::Unsupported(
            "directed graphs are not accepted by the search engine",
        ));
    }
    if g.is_weighted() {
        return Err(Error::Unsupported(
            "weighted graphs go through the weighted module",
        ));
    }
    Ok(())
}

fn check_vertex(g: &Graph, s: usize) -> Result<()> {
    if s >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: s,
            vertex_count: g.vertex_count(),
        });
    }
    Ok(())
}

trait Run {
    fn dist(&self) -> &[usize];
    fn centrality(&self, v: usize) -> usize;
    fn path(&self, v: usize) -> Vec<usize>;
}

/// Arc-keyed search state.
struct EdgeRun<'g> {
    g: &'g Graph,
    source: usize,
    dist: Vec<usize>,
    preds: Vec<Vec<(usize, usize)>>,
    score: Vec<u32>,
    back: Vec<usize>,
    best_in: Vec<usize>,
}

impl<'g> EdgeRun<'g> {
    fn run(g: &'g Graph, s: usize) -> Self {
        let n = g.vertex_count();
        let mut dist = vec![UNREACHABLE; n];
        let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut score = vec![UNSET; g.arc_count()];
        let mut back = vec![NONE; g.arc_count()];
        let mut best_in = vec![NONE; n];
        let mut mark_u = vec![0u32; n];
        let mut mark_w = vec![0u32; n];
        let (mut stamp_u, mut stamp_w) = (0u32, 0u32);
        let mut succ: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();

        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            // every predecessor of u was popped earlier, so its arcs are final
            if u != s {
                let mut best = NONE;
                for &(_, slot) in &preds[u] {
                    if best == NONE || score[slot] > score[best] {
                        best = slot;
                    }
                }
                best_in[u] = best;
            }

            succ.clear();
            let offset = g.arc_offset(u);
            for (i, &v) in g.neighbors(u).iter().enumerate() {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    preds[v].push((u, offset + i));
                    succ.push((v, offset + i));
                }
            }
            if succ.is_empty() {
                continue;
            }

            stamp_u += 1;
            mark_u[u] = stamp_u;
            for &x in g.neighbors(u) {
                mark_u[x] = stamp_u;
            }

            if u == s {
                let base = g.degree(s) as u32;
                for &(v, slot) in &succ {
                    let gain = g
                        .neighbors(v)
                        .iter()
                        .filter(|&&x| mark_u[x] != stamp_u)
                        .count();
                    score[slot] = base - 1 + gain as u32;
                }
                continue;
            }

            for &(w, w_slot) in &preds[u] {
                stamp_w += 1;
                mark_w[w] = stamp_w;
                for &x in g.neighbors(w) {
                    mark_w[x] = stamp_w;
                }
                let prefix = score[w_slot];
                for &(v, slot) in &succ {
                    let gain = g
                        .neighbors(v)
                        .iter()
                        .filter(|&&x| mark_u[x] != stamp_u && mark_w[x] != stamp_w)
                        .count();
                    let candidate = prefix - 1 + gain as u32;
                    if score[slot] == UNSET || candidate > score[slot] {
                        score[slot] = candidate;
                        back[slot] = w_slot;
                    }
                }
            }
        }

        Self {
            g,
            source: s,
            dist,
            preds,
            score,
            back,
            best_in,
        }
    }
}

impl Run for EdgeRun<'_> {
    fn dist(&self) -> &[usize] {
        &self.dist
    }

    fn centrality(&self, v: usize) -> usize {
        if v == self.source {
            self.g.degree(v)
        } else {
            self.score[self.best_in[v]] as usize
        }
    }

    fn path(&self, v: usize) -> Vec<usize> {
        let mut vertices = vec![v];
        let mut slot = self.best_in[v];
        while slot != NONE {
            vertices.push(self.g.arc_tail(slot));
            slot = self.back[slot];
        }
        vertices.reverse();
        vertices
    }
}

/// Vertex-keyed search state.
struct VertexRun {
    dist: Vec<usize>,
    preds: Vec<Vec<usize>>,
    paths: Vec<Vec<usize>>,
    sizes: Vec<usize>,
}

impl VertexRun {
    fn run(g: &Graph, s: usize) -> Self {
        let n = g.vertex_count();
        let mut dist = vec![UNREACHABLE; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut paths: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut nbhd: Vec<Option<VertexSet>> = vec![None; n];
        let mut members: Vec<Option<VertexSet>> = vec![None; n];
        let mut queue = VecDeque::new();

        dist[s] = 0;
        paths[s] = vec![s];
        nbhd[s] = Some(g.neighborhood_unchecked(&[s], NeighborRule::Out));
        members[s] = Some(VertexSet::from_iter_in(n, [s]));
        queue.push_back(s);

        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let d_new = dist[u] + 1;
                if d_new == 1 {
                    queue.push_back(v);
                    dist[v] = 1;
                    paths[v] = vec![s, v];
                    nbhd[v] = Some(g.neighborhood_unchecked(&[s, v], NeighborRule::Out));
                    members[v] = Some(VertexSet::from_iter_in(n, [s, v]));
                    preds[v] = vec![s];
                    continue;
                }
                if d_new < dist[v] {
                    assert_eq!(
                        dist[v], UNREACHABLE,
                        "unit-weight search relaxed a finite distance"
                    );
                    queue.push_back(v);
                    dist[v] = d_new;
                } else if d_new != dist[v] {
                    continue;
                }
                preds[v].push(u);
                for i in 0..preds[u].len() {
                    let w = preds[u][i];
                    let (cand_n, cand_m) = extend(
                        g,
                        nbhd[w].as_ref().expect("predecessor settled"),
                        members[w].as_ref().expect("predecessor settled"),
                        u,
                        v,
                    );
                    let better = nbhd[v].as_ref().is_none_or(|cur| cand_n.len() > cur.len());
                    if better {
                        let mut p = paths[w].clone();
                        p.extend([u, v]);
                        paths[v] = p;
                        nbhd[v] = Some(cand_n);
                        members[v] = Some(cand_m);
                    }
                }
            }
        }
        let sizes = nbhd
            .iter()
            .map(|s| s.as_ref().map_or(0, VertexSet::len))
            .collect();
        Self {
            dist,
            preds,
            paths,
            sizes,
        }
    }
}

impl Run for VertexRun {
    fn dist(&self) -> &[usize] {
        &self.dist
    }

    fn centrality(&self, v: usize) -> usize {
        self.sizes[v]
    }

    fn path(&self, v: usize) -> Vec<usize> {
        self.paths[v].clone()
    }
}

fn state_from(run: &impl Run, source: usize, preds: Vec<Vec<usize>>) -> SourceSearchState {
    let dist = run.dist().to_vec();
    let reachable = |v: usize| dist[v] != UNREACHABLE;
    let paths = (0..dist.len())
        .map(|v| reachable(v).then(|| Path::new(run.path(v))))
        .collect();
    let centralities = (0..dist.len())
        .map(|v| reachable(v).then(|| run.centrality(v)))
        .collect();
    SourceSearchState {
        source,
        dist,
        preds,
        paths,
        centralities,
    }
}

/// Most central shortest paths from `s` to every reachable vertex.
pub fn single_source(g: &Graph, s: usize) -> Result<SourceSearchState> {
    single_source_with(g, s, Recurrence::LastEdge)
}

pub fn single_source_with(
    g: &Graph,
    s: usize,
    recurrence: Recurrence,
) -> Result<SourceSearchState> {
    check_input(g)?;
    check_vertex(g, s)?;
    Ok(match recurrence {
        Recurrence::LastEdge => {
            let run = EdgeRun::run(g, s);
            let preds = run
                .preds
                .iter()
                .map(|p| p.iter().map(|&(u, _)| u).collect())
                .collect();
            state_from(&run, s, preds)
        }
        Recurrence::LastVertex => {
            let run = VertexRun::run(g, s);
            let preds = run.preds.clone();
            state_from(&run, s, preds)
        }
    })
}

/// Best path overall and best path among diameter-length shortest paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub overall: CentralityResult,
    pub at_diameter: CentralityResult,
    pub diameter: usize,
}

#[derive(Default)]
struct Fold {
    overall: Option<CentralityResult>,
    eccentricity: usize,
    at_eccentricity: Option<CentralityResult>,
    timed_out: bool,
}

impl Fold {
    fn merge(self, other: Fold) -> Fold {
        let (ecc, at_ecc) = match self.eccentricity.cmp(&other.eccentricity) {
            Ordering::Greater => (self.eccentricity, self.at_eccentricity),
            Ordering::Less => (other.eccentricity, other.at_eccentricity),
            Ordering::Equal => (
                self.eccentricity,
                pick(self.at_eccentricity, other.at_eccentricity),
            ),
        };
        Fold {
            overall: pick(self.overall, other.overall),
            eccentricity: ecc,
            at_eccentricity: at_ecc,
            timed_out: self.timed_out || other.timed_out,
        }
    }
}

fn summarize(run: &impl Run, s: usize, min_vertices: usize) -> Fold {
    let dist = run.dist();
    let key = |v: usize| (run.centrality(v), dist[v]);
    // within one source, (centrality desc, length asc, target asc) decides
    let better = |a: usize, b: usize| {
        let (ca, la) = key(a);
        let (cb, lb) = key(b);
        ca > cb || (ca == cb && (la < lb || (la == lb && a < b)))
    };
    let mut best: Option<usize> = None;
    let mut ecc = 0;
    let mut at_ecc: Option<usize> = None;
    for v in 0..dist.len() {
        let d = dist[v];
        if d == UNREACHABLE {
            continue;
        }
        if d + 1 >= min_vertices && best.is_none_or(|b| better(v, b)) {
            best = Some(v);
        }
        if d > ecc {
            ecc = d;
            at_ecc = Some(v);
        } else if d == ecc && d > 0 && at_ecc.is_some_and(|b| better(v, b)) {
            at_ecc = Some(v);
        }
    }
    let result = |v: usize| CentralityResult::new(Path::new(run.path(v)), run.centrality(v));
    debug_assert!(best.is_none_or(|v| run.path(v)[0] == s));
    Fold {
        overall: best.map(result),
        eccentricity: ecc,
        at_eccentricity: at_ecc.map(result),
        timed_out: false,
    }
}

fn source_fold(g: &Graph, s: usize, opts: &SolveOptions) -> Fold {
    match opts.recurrence {
        Recurrence::LastEdge => summarize(&EdgeRun::run(g, s), s, opts.min_vertices),
        Recurrence::LastVertex => summarize(&VertexRun::run(g, s), s, opts.min_vertices),
    }
}

/// Runs the search from every vertex and folds the per-source optima.
pub fn analyze(g: &Graph, opts: &SolveOptions) -> Result<Analysis> {
    analyze_until(g, opts, None)
}

/// As [`analyze`], giving up with [`Error::Timeout`] once `deadline` passes.
/// The deadline is checked before each source.
pub fn analyze_until(
    g: &Graph,
    opts: &SolveOptions,
    deadline: Option<Instant>,
) -> Result<Analysis> {
    check_input(g)?;
    let fold = par::map_reduce(
        g.vertex_count(),
        opts.workers,
        Fold::default,
        |s| {
            if deadline.is_some_and(|d| Instant::now() > d) {
                return Fold {
                    timed_out: true,
                    ..Fold::default()
                };
            }
            source_fold(g, s, opts)
        },
        Fold::merge,
    );
    if fold.timed_out {
        return Err(Error::Timeout);
    }
    match (fold.overall, fold.at_eccentricity) {
        (Some(overall), Some(at_diameter)) => Ok(Analysis {
            overall,
            at_diameter,
            diameter: fold.eccentricity,
        }),
        _ => Err(Error::NoPath),
    }
}

/// The most degree-central shortest path with at least two vertices.
pub fn best_overall(g: &Graph) -> Result<CentralityResult> {
    best_overall_with(g, &SolveOptions::default())
}

pub fn best_overall_with(g: &Graph, opts: &SolveOptions) -> Result<CentralityResult> {
    check_input(g)?;
    let fold = par::map_reduce(
        g.vertex_count(),
        opts.workers,
        Fold::default,
        |s| source_fold(g, s, opts),
        Fold::merge,
    );
    fold.overall.ok_or(Error::NoPath)
}

/// The most central shortest path among those whose length equals the diameter.
pub fn best_at_diameter(g: &Graph) -> Result<CentralityResult> {
    analyze(g, &SolveOptions::default()).map(|a| a.at_diameter)
}
