//! Graph representation, path validity, path neighborhoods and centrality.
//!
//! Vertices are dense ids `0..vertex_count`. Adjacency is stored in CSR form
//! with every list sorted by neighbor id, so all iteration orders (and with
//! them every tie-break downstream) are deterministic.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::par::{self, Workers};
use crate::vertex_set::VertexSet;

/// Hop distance marking an unreachable vertex.
pub const UNREACHABLE: usize = usize::MAX;

/// Relative tolerance used when comparing weighted path lengths.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[inline]
pub(crate) fn weights_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= WEIGHT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Which vertices count as adjacent to a path in a directed graph.
///
/// Undirected graphs give the same answer under both rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborRule {
    /// Heads of arcs leaving a path vertex.
    #[default]
    Out,
    /// Any vertex joined to a path vertex by an arc in either direction.
    Incident,
}

#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: usize,
    directed: bool,
    weighted: bool,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    arc_weights: Vec<f64>,
    // reverse arcs, directed graphs only
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    in_weights: Vec<f64>,
}

impl Graph {
    /// Unit-weight graph on `vertex_count` vertices.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        directed: bool,
    ) -> Result<Self> {
        let edges = edges.into_iter().map(|(u, v)| Edge { u, v, weight: 1.0 });
        Self::build(vertex_count, edges, directed, false)
    }

    /// Graph with an explicit positive weight on every edge.
    pub fn weighted(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        directed: bool,
    ) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v, weight)| Edge { u, v, weight });
        Self::build(vertex_count, edges, directed, true)
    }

    /// Unit-weight graph whose vertex count is one more than the largest id.
    pub fn from_edge_list(pairs: &[(usize, usize)], directed: bool) -> Result<Self> {
        let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(n, pairs.iter().copied(), directed)
    }

    fn build(
        vertex_count: usize,
        edges: impl Iterator<Item = Edge>,
        directed: bool,
        weighted: bool,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        for e in edges {
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::BadWeight {
                    u: e.u,
                    v: e.v,
                    weight: e.weight,
                });
            }
            let key = if directed {
                (e.u, e.v)
            } else {
                (e.u.min(e.v), e.u.max(e.v))
            };
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(e.u, e.v));
            }
            stored.push(e);
        }

        let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); vertex_count];
        let mut inc: Vec<Vec<(usize, f64)>> =
            vec![Vec::new(); if directed { vertex_count } else { 0 }];
        for e in &stored {
            out[e.u].push((e.v, e.weight));
            if directed {
                inc[e.v].push((e.u, e.weight));
            } else {
                out[e.v].push((e.u, e.weight));
            }
        }
        let (offsets, targets, arc_weights) = compress(out);
        let (in_offsets, in_sources, in_weights) = compress(inc);
        Ok(Self {
            vertex_count,
            directed,
            weighted,
            edges: stored,
            offsets,
            targets,
            arc_weights,
            in_offsets,
            in_sources,
            in_weights,
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of edges as given at construction (an undirected edge counts once).
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// True when the graph was built with explicit weights.
    #[inline]
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Out-neighbors of `u`, sorted ascending.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn neighbor_weights(&self, u: usize) -> &[f64] {
        &self.arc_weights[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Index of the first arc leaving `u` in the flat arc arrays.
    #[inline]
    pub(crate) fn arc_offset(&self, u: usize) -> usize {
        self.offsets[u]
    }

    #[inline]
    pub(crate) fn arc_count(&self) -> usize {
        self.targets.len()
    }

    /// Tail vertex of the arc stored at `slot`.
    pub(crate) fn arc_tail(&self, slot: usize) -> usize {
        self.offsets.partition_point(|&o| o <= slot) - 1
    }

    /// In-neighbors of `v`, sorted ascending.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        if self.directed {
            &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
        } else {
            self.neighbors(v)
        }
    }

    pub fn in_neighbor_weights(&self, v: usize) -> &[f64] {
        if self.directed {
            &self.in_weights[self.in_offsets[v]..self.in_offsets[v + 1]]
        } else {
            self.neighbor_weights(v)
        }
    }

    /// Out-degree (the degree for undirected graphs).
    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|u| self.degree(u))
            .max()
            .unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Weight of the arc `u -> v`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.neighbor_weights(u)[i])
    }

    /// Same vertices and edges with every weight dropped to one.
    pub fn unweighted(&self) -> Graph {
        Graph::new(
            self.vertex_count,
            self.edges.iter().map(|e| (e.u, e.v)),
            self.directed,
        )
        .expect("edges already validated")
    }

    pub fn validate_path(&self, path: &Path) -> Result<()> {
        let vs = path.vertices();
        if vs.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        let mut seen = VertexSet::new(self.vertex_count);
        for &v in vs {
            if v >= self.vertex_count {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    vertex_count: self.vertex_count,
                });
            }
            if !seen.insert(v) {
                return Err(Error::InvalidPath(format!("vertex {v} repeats")));
            }
        }
        for w in vs.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(Error::InvalidPath(format!("no edge {} -> {}", w[0], w[1])));
            }
        }
        Ok(())
    }

    /// Vertices adjacent to the path but not on it.
    pub fn neighborhood(&self, path: &Path) -> Result<VertexSet> {
        self.neighborhood_with(path, NeighborRule::Out)
    }

    pub fn neighborhood_with(&self, path: &Path, rule: NeighborRule) -> Result<VertexSet> {
        self.validate_path(path)?;
        Ok(self.neighborhood_unchecked(path.vertices(), rule))
    }

    pub(crate) fn neighborhood_unchecked(
        &self,
        vertices: &[usize],
        rule: NeighborRule,
    ) -> VertexSet {
        let mut set = VertexSet::new(self.vertex_count);
        for &u in vertices {
            for &x in self.neighbors(u) {
                set.insert(x);
            }
            if rule == NeighborRule::Incident && self.directed {
                for &x in self.in_neighbors(u) {
                    set.insert(x);
                }
            }
        }
        for &u in vertices {
            set.remove(u);
        }
        set
    }

    /// `|N(P)|`, the degree centrality of a path.
    pub fn centrality(&self, path: &Path) -> Result<usize> {
        self.neighborhood(path).map(|s| s.len())
    }

    pub fn centrality_with(&self, path: &Path, rule: NeighborRule) -> Result<usize> {
        self.neighborhood_with(path, rule).map(|s| s.len())
    }

    /// Sum of arc weights along the path (edge count when unweighted).
    pub fn path_weight(&self, path: &Path) -> Result<f64> {
        self.validate_path(path)?;
        Ok(path
            .vertices()
            .windows(2)
            .map(|w| self.edge_weight(w[0], w[1]).expect("validated"))
            .sum())
    }

    /// True iff the path's length equals the shortest distance between its endpoints.
    pub fn is_shortest_path(&self, path: &Path) -> Result<bool> {
        let length = self.path_weight(path)?;
        let s = path.first();
        let t = path.last();
        if !self.weighted {
            return Ok(hop_distances(self, s)[t] == path.edge_count());
        }
        Ok(weights_tie(shortest_distances(self, s)[t], length))
    }
}

fn compress(lists: Vec<Vec<(usize, f64)>>) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let mut offsets = Vec::with_capacity(lists.len() + 1);
    let mut targets = Vec::new();
    let mut weights = Vec::new();
    offsets.push(0);
    for mut list in lists {
        list.sort_by_key(|&(v, _)| v);
        for (v, w) in list {
            targets.push(v);
            weights.push(w);
        }
        offsets.push(targets.len());
    }
    (offsets, targets, weights)
}

/// Ordered sequence of distinct vertices. Validity is checked against a graph
/// by [`Graph::validate_path`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len()
    }

    pub fn edge_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path::new(v)
    }
}

/// BFS hop counts from `s`; unreachable vertices hold [`UNREACHABLE`].
pub fn hop_distances(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    // min-heap on distance, then vertex id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Shortest distances from `s` as floats; unreachable is `f64::INFINITY`.
/// BFS for unweighted graphs, Dijkstra otherwise.
pub fn shortest_distances(g: &Graph, s: usize) -> Vec<f64> {
    if !g.is_weighted() {
        return hop_distances(g, s)
            .into_iter()
            .map(|d| {
                if d == UNREACHABLE {
                    f64::INFINITY
                } else {
                    d as f64
                }
            })
            .collect();
    }
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(HeapItem(0.0, s));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (&v, &w) in g.neighbors(u).iter().zip(g.neighbor_weights(u)) {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_degree: usize,
    /// Longest finite hop distance over all ordered pairs.
    pub diameter: usize,
}

pub fn stats(g: &Graph) -> GraphStats {
    stats_with(g, Workers::Auto)
}

pub fn stats_with(g: &Graph, workers: Workers) -> GraphStats {
    let diameter = par::map_reduce(
        g.vertex_count(),
        workers,
        || 0,
        |s| {
            hop_distances(g, s)
                .into_iter()
                .filter(|&d| d != UNREACHABLE)
                .max()
                .unwrap_or(0)
        },
        usize::max,
    );
    GraphStats {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        max_degree: g.max_degree(),
        diameter,
    }
}
