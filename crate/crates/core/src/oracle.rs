//! Brute-force ground truth: enumerate every shortest path and keep the most
//! central one. Deliberately simple; correctness over speed.
//!
//! Distances come from BFS or Dijkstra, the shortest-path DAG keeps the arcs
//! `(u, v)` with `d(u) + w(u, v) = d(v)`, and every DAG walk from the source is
//! a shortest path. Works for directed and weighted graphs.

use crate::error::{Error, Result};
use crate::graph::{shortest_distances, weights_tie, Graph, NeighborRule, Path};
use crate::mdcsp::{pick, CentralityResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Cap on paths enumerated for a single `(s, t)` pair.
    pub max_paths: usize,
    /// Cap on paths enumerated over a whole call.
    pub max_total: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_paths: 1_000_000,
            max_total: 100_000_000,
        }
    }
}

impl EnumerationBudget {
    pub fn new(max_paths: usize, max_total: usize) -> Result<Self> {
        if max_paths == 0 || max_total == 0 {
            return Err(Error::InvalidSpec(
                "enumeration caps must be positive".into(),
            ));
        }
        Ok(Self {
            max_paths,
            max_total,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub min_vertices: usize,
    pub rule: NeighborRule,
    pub budget: EnumerationBudget,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            rule: NeighborRule::Out,
            budget: EnumerationBudget::default(),
        }
    }
}

/// Predecessor lists of the shortest-path DAG rooted at `s`.
fn dag_preds(g: &Graph, dist: &[f64]) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .map(|v| {
            if dist[v].is_infinite() {
                return Vec::new();
            }
            g.in_neighbors(v)
                .iter()
                .zip(g.in_neighbor_weights(v))
                .filter(|&(&u, &w)| dist[u].is_finite() && weights_tie(dist[u] + w, dist[v]))
                .map(|(&u, _)| u)
                .filter(|_| dist[v] > 0.0)
                .collect()
        })
        .collect()
}

/// Every shortest `s -> t` path; empty when `t` is unreachable.
pub fn enumerate_shortest_paths(
    g: &Graph,
    s: usize,
    t: usize,
    budget: EnumerationBudget,
) -> Result<Vec<Path>> {
    for x in [s, t] {
        if x >= g.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                vertex_count: g.vertex_count(),
            });
        }
    }
    let dist = shortest_distances(g, s);
    if dist[t].is_infinite() {
        return Ok(Vec::new());
    }
    let preds = dag_preds(g, &dist);
    let cap = budget.max_paths.min(budget.max_total);
    let mut out = Vec::new();
    let mut stack = vec![t];
    walk_back(&preds, s, &mut stack, &mut out, cap, (s, t))?;
    Ok(out)
}

fn walk_back(
    preds: &[Vec<usize>],
    s: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Path>,
    cap: usize,
    pair: (usize, usize),
) -> Result<()> {
    let v = *stack.last().unwrap();
    if v == s {
        if out.len() == cap {
            return Err(Error::BudgetExceeded {
                source_vertex: pair.0,
                target: pair.1,
                count: cap,
            });
        }
        out.push(Path::new(stack.iter().rev().copied().collect()));
        return Ok(());
    }
    for &u in &preds[v] {
        stack.push(u);
        walk_back(preds, s, stack, out, cap, pair)?;
        stack.pop();
    }
    Ok(())
}

/// Number of shortest `s -> v` paths for every `v`, by the predecessor-count
/// recurrence `sigma(v) = sum of sigma(u) over DAG predecessors u`.
pub fn shortest_path_counts(g: &Graph, s: usize) -> Vec<u128> {
    let dist = shortest_distances(g, s);
    let preds = dag_preds(g, &dist);
    let mut order: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| dist[v].is_finite())
        .collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
    let mut sigma = vec![0u128; g.vertex_count()];
    for v in order {
        sigma[v] = if v == s {
            1
        } else {
            preds[v].iter().map(|&u| sigma[u]).sum()
        };
    }
    sigma
}

struct Walker<'a> {
    g: &'a Graph,
    succ: Vec<Vec<usize>>,
    rule: NeighborRule,
    budget: EnumerationBudget,
    per_target: Vec<usize>,
    total: usize,
    best: Vec<Option<CentralityResult>>,
}

impl Walker<'_> {
    fn visit(&mut self, path: &mut Vec<usize>) -> Result<()> {
        let v = *path.last().unwrap();
        self.per_target[v] += 1;
        self.total += 1;
        if self.per_target[v] > self.budget.max_paths || self.total > self.budget.max_total {
            return Err(Error::BudgetExceeded {
                source_vertex: path[0],
                target: v,
                count: self.per_target[v] - 1,
            });
        }
        let c = self.g.neighborhood_unchecked(path, self.rule).len();
        let candidate = CentralityResult::new(Path::new(path.clone()), c);
        self.best[v] = pick(self.best[v].take(), Some(candidate));
        for i in 0..self.succ[v].len() {
            let x = self.succ[v][i];
            path.push(x);
            self.visit(path)?;
            path.pop();
        }
        Ok(())
    }
}

/// For each target `v`, the most central shortest `s -> v` path
/// (`None` when unreachable). Index `s` holds the single-vertex path.
pub fn per_target_best(
    g: &Graph,
    s: usize,
    opts: &OracleOptions,
) -> Result<Vec<Option<CentralityResult>>> {
    let mut spent = 0;
    walk_source(g, s, opts, &mut spent)
}

fn walk_source(
    g: &Graph,
    s: usize,
    opts: &OracleOptions,
    spent: &mut usize,
) -> Result<Vec<Option<CentralityResult>>> {
    if s >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: s,
            vertex_count: g.vertex_count(),
        });
    }
    let dist = shortest_distances(g, s);
    let preds = dag_preds(g, &dist);
    let mut succ = vec![Vec::new(); g.vertex_count()];
    for (v, ps) in preds.iter().enumerate() {
        for &u in ps {
            succ[u].push(v);
        }
    }
    let mut walker = Walker {
        g,
        succ,
        rule: opts.rule,
        budget: opts.budget,
        per_target: vec![0; g.vertex_count()],
        total: *spent,
        best: vec![None; g.vertex_count()],
    };
    let outcome = walker.visit(&mut vec![s]);
    *spent = walker.total;
    outcome.map(|_| walker.best)
}

/// Exact optimum over all shortest paths with at least `min_vertices` vertices.
pub fn brute_force_best(g: &Graph, opts: &OracleOptions) -> Result<CentralityResult> {
    let mut best = None;
    let mut spent = 0;
    for s in 0..g.vertex_count() {
        for r in walk_source(g, s, opts, &mut spent)?.into_iter().flatten() {
            if r.path.vertex_count() >= opts.min_vertices {
                best = pick(best, Some(r));
            }
        }
    }
    best.ok_or(Error::NoPath)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn line_endpoints_have_one_path() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)], false).unwrap();
        let ps = enumerate_shortest_paths(&g, 0, 3, budget()).unwrap();
        assert_eq!(ps, vec![Path::new(vec![0, 1, 2, 3])]);
    }

    #[test]
    fn square_opposite_corners() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], false).unwrap();
        let ps = enumerate_shortest_paths(&g, 0, 2, budget()).unwrap();
        assert_eq!(ps.len(), 2);
    }

    #[test]
    fn complete_bipartite_k23() {
        // sides {0,1} and {2,3,4}: 0 -> 1 goes through each middle vertex
        let g = Graph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], false).unwrap();
        let ps = enumerate_shortest_paths(&g, 0, 1, budget()).unwrap();
        assert_eq!(
            ps,
            vec![
                Path::new(vec![0, 2, 1]),
                Path::new(vec![0, 3, 1]),
                Path::new(vec![0, 4, 1])
            ]
        );
    }

    #[test]
    fn unreachable_target_gives_nothing() {
        let g = Graph::new(3, [(0, 1)], false).unwrap();
        assert!(enumerate_shortest_paths(&g, 0, 2, budget())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], false).unwrap();
        let tight = EnumerationBudget::new(1, 10).unwrap();
        assert!(matches!(
            enumerate_shortest_paths(&g, 0, 2, tight),
            Err(Error::BudgetExceeded { .. })
        ));
        let opts = OracleOptions {
            budget: tight,
            ..Default::default()
        };
        assert!(matches!(
            brute_force_best(&g, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(EnumerationBudget::new(0, 1).is_err());
    }

    #[test]
    fn star_optimum() {
        let g = Graph::new(5, (1..5).map(|v| (0, v)), false).unwrap();
        assert_eq!(
            brute_force_best(&g, &OracleOptions::default())
                .unwrap()
                .centrality,
            3
        );
    }

    #[test]
    fn triangle_with_pendant() {
        // triangle 0-1-2, pendant 3 on 2. Hand enumeration:
        //   <0,1>:{2}=1  <0,2>:{1,3}=2  <1,2>:{0,3}=2  <2,3>:{0,1}=2
        //   <0,2,3>:{1}=1  <1,2,3>:{0}=1
        // best: centrality 2, length 1, smallest pair (0,2)
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)], false).unwrap();
        let r = brute_force_best(&g, &OracleOptions::default()).unwrap();
        assert_eq!(r.centrality, 2);
        assert_eq!(r.path.vertices(), &[0, 2]);
    }

    #[test]
    fn weighted_and_directed_enumeration() {
        let g = Graph::weighted(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)], false).unwrap();
        let ps = enumerate_shortest_paths(&g, 0, 2, budget()).unwrap();
        assert_eq!(ps, vec![Path::new(vec![0, 1, 2])]);
        let d = Graph::new(3, [(0, 1), (1, 2)], true).unwrap();
        assert!(enumerate_shortest_paths(&d, 2, 0, budget())
            .unwrap()
            .is_empty());
        assert_eq!(shortest_path_counts(&d, 0), vec![1, 1, 1]);
    }
}
