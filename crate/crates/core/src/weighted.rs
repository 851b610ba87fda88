//! Weighted variants of the search.
//!
//! Integer weights: every edge of weight `w` is subdivided into `w` unit edges
//! and the arc-keyed search runs on the subdivided graph. The path state is
//! carried as explicit sets because neighbors of earlier path vertices can no
//! longer be located by layer. Centrality is always measured on the original
//! graph; subdivision vertices are transparent.
//!
//! Real weights: all-pairs distances by Floyd–Warshall, one reconstructed path
//! per ordered pair, best centrality wins. Only meaningful when shortest paths
//! are unique, which is checked.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, NeighborRule, Path, UNREACHABLE, WEIGHT_TOLERANCE};
use crate::mdcsp::{pick, CentralityResult};
use crate::par::{self, Workers};
use crate::vertex_set::VertexSet;

/// Position of a subdivision vertex: it sits `position` unit steps from `u`
/// on the chain that replaced edge `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainPosition {
    pub u: usize,
    pub v: usize,
    pub position: usize,
}

#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub unit_graph: Graph,
    /// Vertices `0..original_count` are the input vertices, in order.
    pub original_count: usize,
    /// Entry `i` describes vertex `original_count + i`.
    pub origin_of: Vec<ChainPosition>,
}

impl AugmentedGraph {
    pub fn is_original(&self, v: usize) -> bool {
        v < self.original_count
    }

    /// Sum of all edge weights of the input graph.
    pub fn weight_sum(&self) -> usize {
        self.unit_graph.edge_count()
    }
}

fn integer_weight(u: usize, v: usize, weight: f64) -> Result<usize> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::BadWeight { u, v, weight });
    }
    if weight.fract() != 0.0 || weight > u32::MAX as f64 {
        return Err(Error::NonIntegerWeight { u, v, weight });
    }
    Ok(weight as usize)
}

/// Replaces each edge of weight `w` by a chain of `w` unit edges.
pub fn augment_integer(g: &Graph) -> Result<AugmentedGraph> {
    let n = g.vertex_count();
    let mut origin_of = Vec::new();
    let mut unit_edges = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let w = integer_weight(e.u, e.v, e.weight)?;
        let mut prev = e.u;
        for position in 1..w {
            let aux = n + origin_of.len();
            origin_of.push(ChainPosition {
                u: e.u,
                v: e.v,
                position,
            });
            unit_edges.push((prev, aux));
            prev = aux;
        }
        unit_edges.push((prev, e.v));
    }
    let unit_graph = Graph::new(n + origin_of.len(), unit_edges, g.is_directed())?;
    Ok(AugmentedGraph {
        unit_graph,
        original_count: n,
        origin_of,
    })
}

const NONE: usize = usize::MAX;

#[derive(Clone)]
struct PathState {
    neighborhood: VertexSet,
    members: VertexSet,
    back: usize,
}

impl PathState {
    fn score(&self) -> usize {
        self.neighborhood.len()
    }
}

/// Arc-keyed search from original vertex `s` over the subdivided graph.
struct IntegerRun<'a> {
    aug: &'a AugmentedGraph,
    dist: Vec<usize>,
    states: Vec<Option<PathState>>,
    best_in: Vec<usize>,
}

impl<'a> IntegerRun<'a> {
    fn run(original: &Graph, aug: &'a AugmentedGraph, s: usize) -> Self {
        let unit = &aug.unit_graph;
        let n = unit.vertex_count();
        let universe = aug.original_count;
        let mut dist = vec![UNREACHABLE; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut states: Vec<Option<PathState>> = vec![None; unit.arc_count()];
        let mut best_in = vec![NONE; n];

        // Adds original vertex `x`. Leaving an original vertex into a chain,
        // `x` is the far end of that chain, so the prefix is chosen per
        // original edge rather than per unit arc.
        let step = |prefix: &PathState, back: usize, x: Option<usize>| -> PathState {
            let mut next = prefix.clone();
            next.back = back;
            if let Some(x) = x {
                next.members.insert(x);
                for &y in original.neighbors(x) {
                    next.neighborhood.insert(y);
                }
                next.neighborhood.difference_with(&next.members);
            }
            next
        };
        // original vertex reached by following arc `u -> v` out of original `u`
        let heading = |u: usize, v: usize| -> usize {
            if v < universe {
                v
            } else {
                let c = aug.origin_of[v - universe];
                if c.u == u {
                    c.v
                } else {
                    c.u
                }
            }
        };
        let start = {
            let members = VertexSet::from_iter_in(universe, [s]);
            let neighborhood =
                VertexSet::from_iter_in(universe, original.neighbors(s).iter().copied());
            PathState {
                neighborhood,
                members,
                back: NONE,
            }
        };

        let mut queue = VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if u != s {
                let mut best = NONE;
                for &slot in &preds[u] {
                    let score = states[slot].as_ref().map(PathState::score);
                    if best == NONE || score > states[best].as_ref().map(PathState::score) {
                        best = slot;
                    }
                }
                best_in[u] = best;
            }
            let offset = unit.arc_offset(u);
            for (i, &v) in unit.neighbors(u).iter().enumerate() {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] != dist[u] + 1 {
                    continue;
                }
                let slot = offset + i;
                preds[v].push(slot);
                // inside a chain the far end was already added on entry
                let x = (u < universe).then(|| heading(u, v));
                let state = if u == s {
                    step(&start, NONE, x)
                } else {
                    // pick the most central prefix arriving through each in-arc
                    let mut chosen: Option<PathState> = None;
                    for &w_slot in &preds[u] {
                        if let Some(prefix) = &states[w_slot] {
                            let candidate = step(prefix, w_slot, x);
                            if chosen
                                .as_ref()
                                .is_none_or(|c| candidate.score() > c.score())
                            {
                                chosen = Some(candidate);
                            }
                        }
                    }
                    chosen.expect("every reached vertex has a scored in-arc")
                };
                states[slot] = Some(state);
            }
        }
        Self {
            aug,
            dist,
            states,
            best_in,
        }
    }

    fn result(&self, v: usize) -> CentralityResult {
        let unit = &self.aug.unit_graph;
        let state = self.states[self.best_in[v]].as_ref().unwrap();
        let mut vertices = vec![v];
        let mut slot = self.best_in[v];
        while slot != NONE {
            let tail = unit.arc_tail(slot);
            if self.aug.is_original(tail) {
                vertices.push(tail);
            }
            slot = self.states[slot].as_ref().unwrap().back;
        }
        vertices.reverse();
        CentralityResult::new(Path::new(vertices), state.score())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegerOptions {
    pub min_vertices: usize,
    pub workers: Workers,
}

impl Default for IntegerOptions {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            workers: Workers::Auto,
        }
    }
}

/// Most central shortest path of an undirected graph with positive integer
/// weights. Unweighted graphs are treated as all-unit.
pub fn mdcsp_integer_weighted(g: &Graph) -> Result<CentralityResult> {
    mdcsp_integer_weighted_with(g, &IntegerOptions::default())
}

pub fn mdcsp_integer_weighted_with(g: &Graph, opts: &IntegerOptions) -> Result<CentralityResult> {
    if g.is_directed() {
        return Err(Error::Unsupported(
            "directed graphs are not accepted by the search engine",
        ));
    }
    let aug = augment_integer(g)?;
    let best = par::map_reduce(
        g.vertex_count(),
        opts.workers,
        || None,
        |s| {
            let run = IntegerRun::run(g, &aug, s);
            let mut best = (opts.min_vertices <= 1)
                .then(|| CentralityResult::new(Path::new(vec![s]), g.degree(s)));
            for v in (0..aug.original_count).filter(|&v| v != s && run.dist[v] != UNREACHABLE) {
                best = pick(best, Some(run.result(v)));
            }
            best
        },
        pick,
    );
    best.ok_or(Error::NoPath)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApspTables {
    /// `dist[i][j]`, infinite when `j` is unreachable from `i`.
    pub dist: Vec<Vec<f64>>,
    /// First vertex after `i` on the stored shortest `i -> j` path.
    pub next_hop: Vec<Vec<Option<usize>>>,
}

impl ApspTables {
    /// The stored shortest path from `i` to `j`.
    pub fn path(&self, i: usize, j: usize) -> Option<Path> {
        if self.dist[i][j].is_infinite() {
            return None;
        }
        let mut vertices = vec![i];
        let mut at = i;
        while at != j {
            at = self.next_hop[at][j]?;
            vertices.push(at);
        }
        Some(Path::new(vertices))
    }
}

/// All-pairs shortest paths. Edge weights of unweighted graphs count as one.
pub fn floyd_warshall(g: &Graph) -> ApspTables {
    let n = g.vertex_count();
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    let mut next_hop = vec![vec![None; n]; n];
    for i in 0..n {
        dist[i][i] = 0.0;
        next_hop[i][i] = Some(i);
        for (&j, &w) in g.neighbors(i).iter().zip(g.neighbor_weights(i)) {
            dist[i][j] = w;
            next_hop[i][j] = Some(j);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                    next_hop[i][j] = next_hop[i][k];
                }
            }
        }
    }
    ApspTables { dist, next_hop }
}

fn relative_tie(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * a.abs().max(b.abs())
}

/// Rejects weightings whose shortest paths are not unique.
///
/// Two conditions count as a tie: some vertex `j` is reached from `i` through
/// two predecessors that both lie on a shortest path, or two different vertex
/// pairs are at the same distance. The second only happens for degenerate
/// weightings (like all-equal weights) and flags them even where each pair
/// still happens to have a single shortest path.
fn check_unique(g: &Graph, apsp: &ApspTables, eps: f64) -> Result<()> {
    let n = g.vertex_count();
    let mut seen = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let d = apsp.dist[i][j];
            if d.is_infinite() {
                continue;
            }
            let (sources, weights) = if g.is_directed() {
                (g.in_neighbors(j), g.in_neighbor_weights(j))
            } else {
                (g.neighbors(j), g.neighbor_weights(j))
            };
            let tight = sources
                .iter()
                .zip(weights)
                .filter(|&(&k, &w)| {
                    let dk = apsp.dist[i][k];
                    dk.is_finite() && relative_tie(dk + w, d, eps)
                })
                .count();
            if tight > 1 {
                return Err(Error::AmbiguousShortestPath {
                    source_vertex: i,
                    target: j,
                });
            }
            if g.is_directed() || i < j {
                seen.push((d, i, j));
            }
        }
    }
    seen.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in seen.windows(2) {
        if relative_tie(pair[0].0, pair[1].0, eps) {
            return Err(Error::AmbiguousShortestPath {
                source_vertex: pair[1].1,
                target: pair[1].2,
            });
        }
    }
    Ok(())
}

/// Most central shortest path when shortest paths are unique, as for
/// generic real weights. `tie_epsilon` is relative; [`WEIGHT_TOLERANCE`] is
/// the usual choice.
pub fn mdcsp_continuous_weighted(g: &Graph, tie_epsilon: f64) -> Result<CentralityResult> {
    if !(tie_epsilon >= 0.0 && tie_epsilon.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "tie epsilon {tie_epsilon} must be finite and non-negative"
        )));
    }
    let apsp = floyd_warshall(g);
    check_unique(g, &apsp, tie_epsilon)?;
    let n = g.vertex_count();
    let best = par::map_reduce(
        n,
        Workers::Auto,
        || None,
        |i| {
            let mut best = None;
            for j in (0..n).filter(|&j| j != i) {
                if let Some(path) = apsp.path(i, j) {
                    let c = g
                        .neighborhood_unchecked(path.vertices(), NeighborRule::Out)
                        .len();
                    best = pick(best, Some(CentralityResult::new(path, c)));
                }
            }
            best
        },
        pick,
    );
    best.ok_or(Error::NoPath)
}

/// [`mdcsp_continuous_weighted`] with the default tolerance.
pub fn mdcsp_continuous_weighted_default(g: &Graph) -> Result<CentralityResult> {
    mdcsp_continuous_weighted(g, WEIGHT_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{hop_distances, shortest_distances};
    use crate::mdcsp::best_overall;
    use crate::oracle::{brute_force_best, OracleOptions};

    #[test]
    fn single_edge_subdivision() {
        let g = Graph::weighted(2, [(0, 1, 3.0)], false).unwrap();
        let aug = augment_integer(&g).unwrap();
        assert_eq!(aug.unit_graph.vertex_count(), 4);
        assert_eq!(aug.unit_graph.edge_count(), 3);
        assert_eq!(aug.weight_sum(), 3);
        assert_eq!(
            aug.origin_of[1],
            ChainPosition {
                u: 0,
                v: 1,
                position: 2
            }
        );
        assert_eq!(hop_distances(&aug.unit_graph, 0)[1], 3);
    }

    #[test]
    fn unit_weights_add_nothing() {
        let g = Graph::weighted(3, [(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
        let aug = augment_integer(&g).unwrap();
        assert!(aug.origin_of.is_empty());
        assert_eq!(aug.unit_graph.edges(), g.unweighted().edges());
    }

    #[test]
    fn augmentation_rejects_fractional_weights() {
        let g = Graph::weighted(2, [(0, 1, 1.5)], false).unwrap();
        assert!(matches!(
            augment_integer(&g),
            Err(Error::NonIntegerWeight { .. })
        ));
    }

    #[test]
    fn augmentation_preserves_distances() {
        let g = Graph::weighted(
            5,
            [
                (0, 1, 2.0),
                (1, 2, 1.0),
                (0, 2, 4.0),
                (2, 3, 3.0),
                (3, 4, 1.0),
                (1, 4, 5.0),
            ],
            false,
        )
        .unwrap();
        let aug = augment_integer(&g).unwrap();
        for s in 0..5 {
            let weighted = shortest_distances(&g, s);
            let hops = hop_distances(&aug.unit_graph, s);
            for t in 0..5 {
                assert_eq!(weighted[t], hops[t] as f64);
            }
        }
    }

    #[test]
    fn integer_route_avoids_heavy_edge() {
        // triangle with weights 1, 1, 3: 0 -> 2 must go through 1
        let g = Graph::weighted(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)], false).unwrap();
        let r = mdcsp_integer_weighted(&g).unwrap();
        let oracle = brute_force_best(&g, &OracleOptions::default()).unwrap();
        assert_eq!(r.centrality, oracle.centrality);
        assert_eq!(r.centrality, 1);
        assert!(g.is_shortest_path(&r.path).unwrap());
    }

    #[test]
    fn integer_route_matches_unweighted_engine() {
        let g = Graph::new(
            6,
            [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (1, 5)],
            false,
        )
        .unwrap();
        assert_eq!(
            mdcsp_integer_weighted(&g).unwrap(),
            best_overall(&g).unwrap()
        );
    }

    #[test]
    fn chain_entry_looks_ahead_to_far_end() {
        // From 3, vertex 1 is reached equally well via 5 or via 0; only the
        // route through 5 leaves 0 as a neighbor once the weight-2 chain to 4
        // is followed. Choosing the prefix per unit arc misses <3,5,1,4>.
        let g = Graph::weighted(
            9,
            [
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 5, 3.0),
                (0, 7, 1.0),
                (1, 4, 2.0),
                (1, 5, 4.0),
                (2, 3, 4.0),
                (3, 5, 2.0),
                (3, 8, 1.0),
                (4, 6, 1.0),
                (4, 7, 2.0),
            ],
            false,
        )
        .unwrap();
        let r = mdcsp_integer_weighted(&g).unwrap();
        assert_eq!(r.centrality, 5);
        assert_eq!(
            r.centrality,
            brute_force_best(&g, &OracleOptions::default())
                .unwrap()
                .centrality
        );
        assert!(g.is_shortest_path(&r.path).unwrap());
    }

    #[test]
    fn apsp_small_cases() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)], false).unwrap();
        let t = floyd_warshall(&k3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.dist[i][j], if i == j { 0.0 } else { 1.0 });
            }
        }
        let line = Graph::weighted(3, [(0, 1, 2.0), (1, 2, 5.0)], false).unwrap();
        let t = floyd_warshall(&line);
        assert_eq!(t.dist[0][2], 7.0);
        assert_eq!(t.path(2, 0).unwrap().vertices(), &[2, 1, 0]);
    }

    #[test]
    fn unit_triangle_is_ambiguous() {
        let k3 = Graph::weighted(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], false).unwrap();
        assert!(matches!(
            mdcsp_continuous_weighted(&k3, WEIGHT_TOLERANCE),
            Err(Error::AmbiguousShortestPath { .. })
        ));
    }

    #[test]
    fn square_with_power_of_two_weights() {
        let g = Graph::weighted(
            4,
            [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 4.0), (3, 0, 8.0)],
            false,
        )
        .unwrap();
        let r = mdcsp_continuous_weighted_default(&g).unwrap();
        let oracle = brute_force_best(&g, &OracleOptions::default()).unwrap();
        assert_eq!(r, oracle);
    }

    #[test]
    fn equal_alternatives_are_ambiguous() {
        let g = Graph::weighted(
            4,
            [(0, 1, 1.0), (1, 2, 1.5), (0, 3, 1.5), (3, 2, 1.0)],
            false,
        )
        .unwrap();
        assert!(matches!(
            mdcsp_continuous_weighted_default(&g),
            Err(Error::AmbiguousShortestPath { .. })
        ));
    }
}
