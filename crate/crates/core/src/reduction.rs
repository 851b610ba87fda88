//! Max 2-SAT to weighted most-central-shortest-path gadget, plus an
//! exhaustive checker for small instances.
//!
//! Vertex layout for `U` variables and `C` clauses:
//!
//! | ids              | role                         |
//! |------------------|------------------------------|
//! | `0..U`           | `x_i` (positive literals)    |
//! | `U..2U`          | `x̄_i` (negative literals)    |
//! | `2U..2U+4`       | `s`, `s̄`, `t`, `t̄`           |
//! | `2U+4..2U+4+C`   | `y_c`, one per clause        |
//!
//! Spine arcs run from every literal of variable `i` to both literals of
//! variable `i + 1` with weight 1. Both literals of the first variable point
//! at `s` and `s̄`, both literals of the last point at `t` and `t̄`. Each `y_c`
//! is joined to its two literal vertices by undirected edges of weight `U`.
//!
//! A truth assignment satisfying `k` clauses corresponds to the spine path
//! through the true literals, whose centrality is `U + 4 + k`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::SeededRng;
use crate::graph::{Graph, NeighborRule, Path};
use crate::oracle::{brute_force_best, enumerate_shortest_paths, EnumerationBudget, OracleOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn negative(var: usize) -> Self {
        Self { var, negated: true }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    fn to_signed(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

pub type Clause = (Literal, Literal);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sat2Instance {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl Sat2Instance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        let inst = Self { num_vars, clauses };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::InvalidInstance("need at least one variable".into()));
        }
        for (i, (a, b)) in self.clauses.iter().enumerate() {
            for lit in [a, b] {
                if lit.var >= self.num_vars {
                    return Err(Error::InvalidInstance(format!(
                        "clause {} uses variable {} but only {} exist",
                        i + 1,
                        lit.var + 1,
                        self.num_vars
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|(a, b)| a.holds(assignment) || b.holds(assignment))
            .count()
    }

    /// Random instance whose clauses each mention two different variables.
    /// With a single variable both literals come from it.
    pub fn random(num_vars: usize, num_clauses: usize, seed: u64) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidInstance("need at least one variable".into()));
        }
        let mut rng = SeededRng::new(seed);
        let clauses = (0..num_clauses)
            .map(|_| {
                let a = rng.below(num_vars);
                let b = if num_vars == 1 {
                    a
                } else {
                    (a + 1 + rng.below(num_vars - 1)) % num_vars
                };
                let lit = |var, rng: &mut SeededRng| Literal {
                    var,
                    negated: rng.below(2) == 1,
                };
                let first = lit(a, &mut rng);
                (first, lit(b, &mut rng))
            })
            .collect();
        Self::new(num_vars, clauses)
    }
}

/// Text form: optional `c` comment lines, a `p sat2 <vars> <clauses>` header,
/// then one clause per line as two signed one-based literals, optionally
/// followed by a terminating `0`.
impl FromStr for Sat2Instance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "p" {
                if header.is_some() {
                    return Err(parse_err(line_no, "second header".into()));
                }
                if fields.len() != 4 || fields[1] != "sat2" {
                    return Err(parse_err(
                        line_no,
                        "expected `p sat2 <vars> <clauses>`".into(),
                    ));
                }
                let num = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(line_no, format!("bad count `{s}`")))
                };
                header = Some((num(fields[2])?, num(fields[3])?));
                continue;
            }
            let Some((num_vars, _)) = header else {
                return Err(parse_err(line_no, "clause before header".into()));
            };
            let mut lits = Vec::new();
            for f in &fields {
                let v: i64 = f
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad literal `{f}`")))?;
                if v == 0 {
                    break;
                }
                let var = v.unsigned_abs() as usize - 1;
                if var >= num_vars {
                    return Err(parse_err(
                        line_no,
                        format!("literal {v} exceeds {num_vars} variables"),
                    ));
                }
                lits.push(Literal {
                    var,
                    negated: v < 0,
                });
            }
            if lits.len() != 2 {
                return Err(parse_err(
                    line_no,
                    format!("expected 2 literals, found {}", lits.len()),
                ));
            }
            clauses.push((lits[0], lits[1]));
        }
        let (num_vars, num_clauses) =
            header.ok_or_else(|| parse_err(0, "missing header".into()))?;
        if clauses.len() != num_clauses {
            return Err(parse_err(
                0,
                format!("header says {num_clauses} clauses, found {}", clauses.len()),
            ));
        }
        Sat2Instance::new(num_vars, clauses)
    }
}

impl fmt::Display for Sat2Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p sat2 {} {}", self.num_vars, self.clauses.len())?;
        for (a, b) in &self.clauses {
            writeln!(f, "{} {}", a.to_signed(), b.to_signed())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Literal(Literal),
    Source,
    SourceBar,
    Target,
    TargetBar,
    Clause(usize),
}

impl Role {
    pub fn is_terminal(&self) -> bool {
        matches!(
            self,
            Role::Source | Role::SourceBar | Role::Target | Role::TargetBar
        )
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Literal(l) if l.negated => write!(f, "~x{}", l.var + 1),
            Role::Literal(l) => write!(f, "x{}", l.var + 1),
            Role::Source => write!(f, "s"),
            Role::SourceBar => write!(f, "~s"),
            Role::Target => write!(f, "t"),
            Role::TargetBar => write!(f, "~t"),
            Role::Clause(c) => write!(f, "y{}", c + 1),
        }
    }
}

/// One edge of the construction; `undirected` edges appear as two arcs in `graph`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub undirected: bool,
}

#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub roles: Vec<Role>,
    pub edges: Vec<GadgetEdge>,
    pub num_vars: usize,
}

impl GadgetGraph {
    pub fn literal_vertex(&self, lit: Literal) -> usize {
        literal_vertex(self.num_vars, lit)
    }

    pub fn clause_vertex(&self, c: usize) -> usize {
        2 * self.num_vars + 4 + c
    }

    /// Edges of the construction, counting each undirected edge once.
    pub fn logical_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> String {
        self.roles[v].to_string()
    }
}

fn literal_vertex(num_vars: usize, lit: Literal) -> usize {
    if lit.negated {
        num_vars + lit.var
    } else {
        lit.var
    }
}

/// Builds the gadget. A clause repeating the same literal gets a single edge.
pub fn build_gadget(inst: &Sat2Instance) -> Result<GadgetGraph> {
    inst.validate()?;
    let u = inst.num_vars;
    let n = 2 * u + 4 + inst.clauses.len();
    let [s, s_bar, t, t_bar] = [2 * u, 2 * u + 1, 2 * u + 2, 2 * u + 3];
    let lits = |i: usize| {
        [
            literal_vertex(u, Literal::positive(i)),
            literal_vertex(u, Literal::negative(i)),
        ]
    };

    let mut edges = Vec::new();
    let mut arc = |a: usize, b: usize, weight: f64, undirected: bool| {
        edges.push(GadgetEdge {
            u: a,
            v: b,
            weight,
            undirected,
        });
    };
    for i in 0..u.saturating_sub(1) {
        for a in lits(i) {
            for b in lits(i + 1) {
                arc(a, b, 1.0, false);
            }
        }
    }
    for a in lits(0) {
        arc(a, s, 1.0, false);
        arc(a, s_bar, 1.0, false);
    }
    for a in lits(u - 1) {
        arc(a, t, 1.0, false);
        arc(a, t_bar, 1.0, false);
    }
    for (c, (a, b)) in inst.clauses.iter().enumerate() {
        let y = 2 * u + 4 + c;
        let (va, vb) = (literal_vertex(u, *a), literal_vertex(u, *b));
        arc(y, va, u as f64, true);
        if vb != va {
            arc(y, vb, u as f64, true);
        }
    }

    let arcs = edges.iter().flat_map(|e| {
        let forward = (e.u, e.v, e.weight);
        let back = e.undirected.then_some((e.v, e.u, e.weight));
        std::iter::once(forward).chain(back)
    });
    let graph = Graph::weighted(n, arcs, true)?;

    let mut roles = Vec::with_capacity(n);
    roles.extend((0..u).map(|i| Role::Literal(Literal::positive(i))));
    roles.extend((0..u).map(|i| Role::Literal(Literal::negative(i))));
    roles.extend([Role::Source, Role::SourceBar, Role::Target, Role::TargetBar]);
    roles.extend((0..inst.clauses.len()).map(Role::Clause));
    Ok(GadgetGraph {
        graph,
        roles,
        edges,
        num_vars: u,
    })
}

pub const MAX_EXHAUSTIVE_VARS: usize = 20;

/// Largest number of clauses any assignment satisfies, by exhaustion.
pub fn max_satisfiable(inst: &Sat2Instance) -> Result<usize> {
    Ok(best_assignment(inst)?.1)
}

/// A maximizing assignment (smallest in bit order) and its count.
pub fn best_assignment(inst: &Sat2Instance) -> Result<(Vec<bool>, usize)> {
    inst.validate()?;
    if inst.num_vars > MAX_EXHAUSTIVE_VARS {
        return Err(Error::TooLarge(format!(
            "{} variables exceeds the exhaustive limit of {MAX_EXHAUSTIVE_VARS}",
            inst.num_vars
        )));
    }
    let mut best = (Vec::new(), 0);
    let mut assignment = vec![false; inst.num_vars];
    for mask in 0u64..1 << inst.num_vars {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = mask >> i & 1 == 1;
        }
        let count = inst.satisfied_count(&assignment);
        if mask == 0 || count > best.1 {
            best = (assignment.clone(), count);
        }
    }
    Ok(best)
}

/// Spine path through the literals made true by `assignment`.
pub fn assignment_path(gg: &GadgetGraph, assignment: &[bool]) -> Path {
    Path::new(
        (0..gg.num_vars)
            .map(|i| {
                gg.literal_vertex(Literal {
                    var: i,
                    negated: !assignment[i],
                })
            })
            .collect(),
    )
}

/// Reads a truth assignment off a shortest path of the gadget.
///
/// Terminal and clause vertices at either end are stripped, the remaining
/// literal segment is extended over the whole spine, and variable `i` is true
/// when the result visits `x_i`. Variables outside the segment take whichever
/// literal gives the larger centrality, preferring `x_i`. Returns the
/// assignment and the normalized path.
pub fn path_to_assignment(gg: &GadgetGraph, p: &Path) -> Result<(Vec<bool>, Path)> {
    gg.graph.validate_path(p)?;
    let mut core: &[usize] = p.vertices();
    while let Some((&first, rest)) = core.split_first() {
        if matches!(gg.roles[first], Role::Literal(_)) {
            break;
        }
        core = rest;
    }
    while let Some((&last, rest)) = core.split_last() {
        if matches!(gg.roles[last], Role::Literal(_)) {
            break;
        }
        core = rest;
    }
    let mut fixed: Vec<Option<bool>> = vec![None; gg.num_vars];
    let mut prev_var: Option<usize> = None;
    for &v in core {
        let Role::Literal(lit) = gg.roles[v] else {
            return Err(Error::InvalidPath(format!(
                "{} inside the literal segment",
                gg.label(v)
            )));
        };
        if prev_var.is_some_and(|pv| pv + 1 != lit.var) {
            return Err(Error::InvalidPath(
                "literal segment does not follow the spine".into(),
            ));
        }
        prev_var = Some(lit.var);
        fixed[lit.var] = Some(!lit.negated);
    }

    let free: Vec<usize> = (0..gg.num_vars).filter(|&i| fixed[i].is_none()).collect();
    let build = |mask: u64| -> Vec<bool> {
        let mut a: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(true)).collect();
        for (bit, &i) in free.iter().enumerate() {
            a[i] = mask >> bit & 1 == 0;
        }
        a
    };
    let score = |a: &[bool]| {
        gg.graph
            .neighborhood_unchecked(assignment_path(gg, a).vertices(), NeighborRule::Incident)
            .len()
    };
    let mut best = build(0);
    if free.len() <= 12 {
        let mut best_score = score(&best);
        for mask in 1u64..1 << free.len() {
            let a = build(mask);
            let c = score(&a);
            if c > best_score {
                best = a;
                best_score = c;
            }
        }
    }
    let path = assignment_path(gg, &best);
    Ok((best, path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdRow {
    pub k: usize,
    /// `k + num_vars + 4`.
    pub threshold: usize,
    /// Some assignment satisfies at least `k` clauses.
    pub satisfiable: bool,
    /// Some shortest path has centrality at least `threshold`.
    pub path_reaches: bool,
}

impl ThresholdRow {
    pub fn holds(&self) -> bool {
        self.satisfiable == self.path_reaches
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub max_satisfiable: usize,
    /// Best centrality over all shortest paths of the gadget.
    pub best_centrality: usize,
    pub best_path: Path,
    pub rule: NeighborRule,
    pub rows: Vec<ThresholdRow>,
}

impl ReductionReport {
    pub fn is_clean(&self) -> bool {
        self.rows.iter().all(ThresholdRow::holds)
    }

    pub fn failures(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.holds())
            .map(|r| r.k)
            .collect()
    }
}

pub const MAX_VERIFY_VARS: usize = 6;
pub const MAX_VERIFY_CLAUSES: usize = 8;

/// Checks, for every `k` in `1..=C`, that `k` clauses are simultaneously
/// satisfiable exactly when the gadget has a shortest path of centrality at
/// least `U + k + 4`. Neighbors are counted in both arc directions.
pub fn verify_reduction(inst: &Sat2Instance) -> Result<ReductionReport> {
    verify_reduction_with(inst, NeighborRule::Incident)
}

/// As [`verify_reduction`] with an explicit neighbor rule for the directed gadget.
pub fn verify_reduction_with(inst: &Sat2Instance, rule: NeighborRule) -> Result<ReductionReport> {
    inst.validate()?;
    if inst.num_vars > MAX_VERIFY_VARS || inst.clauses.len() > MAX_VERIFY_CLAUSES {
        return Err(Error::TooLarge(format!(
            "verification handles up to {MAX_VERIFY_VARS} variables and {MAX_VERIFY_CLAUSES} clauses, got {} and {}",
            inst.num_vars,
            inst.clauses.len()
        )));
    }
    let gg = build_gadget(inst)?;
    let max_sat = max_satisfiable(inst)?;
    let opts = OracleOptions {
        rule,
        ..OracleOptions::default()
    };
    let best = brute_force_best(&gg.graph, &opts)?;
    let rows = (1..=inst.clauses.len())
        .map(|k| {
            let threshold = inst.num_vars + k + 4;
            ThresholdRow {
                k,
                threshold,
                satisfiable: max_sat >= k,
                path_reaches: best.centrality >= threshold,
            }
        })
        .collect();
    Ok(ReductionReport {
        num_vars: inst.num_vars,
        num_clauses: inst.clauses.len(),
        max_satisfiable: max_sat,
        best_centrality: best.centrality,
        best_path: best.path,
        rule,
        rows,
    })
}

/// Every shortest path of the gadget that passes through a clause vertex
/// without ending there.
pub fn paths_through_clause_vertices(gg: &GadgetGraph) -> Result<Vec<Path>> {
    let n = gg.graph.vertex_count();
    let mut found = Vec::new();
    for s in 0..n {
        for t in (0..n).filter(|&t| t != s) {
            for p in enumerate_shortest_paths(&gg.graph, s, t, EnumerationBudget::default())? {
                let interior = &p.vertices()[1..p.vertex_count() - 1];
                if interior
                    .iter()
                    .any(|&v| matches!(gg.roles[v], Role::Clause(_)))
                {
                    found.push(p);
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shortest_distances;

    fn lit(v: i64) -> Literal {
        Literal {
            var: v.unsigned_abs() as usize - 1,
            negated: v < 0,
        }
    }

    fn inst(num_vars: usize, clauses: &[(i64, i64)]) -> Sat2Instance {
        Sat2Instance::new(
            num_vars,
            clauses.iter().map(|&(a, b)| (lit(a), lit(b))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn counts_without_clauses() {
        let gg = build_gadget(&inst(2, &[])).unwrap();
        assert_eq!(gg.graph.vertex_count(), 8);
        assert_eq!(gg.logical_edge_count(), 4 + 8);
    }

    #[test]
    fn clause_edges_carry_variable_count_weight() {
        let gg = build_gadget(&inst(3, &[(1, 2), (-1, 3)])).unwrap();
        let y1 = gg.clause_vertex(0);
        let y2 = gg.clause_vertex(1);
        let mut linked: Vec<(usize, Vec<usize>)> = Vec::new();
        for y in [y1, y2] {
            linked.push((y, gg.graph.neighbors(y).to_vec()));
            for &x in gg.graph.neighbors(y) {
                assert_eq!(gg.graph.edge_weight(y, x), Some(3.0));
                assert_eq!(gg.graph.edge_weight(x, y), Some(3.0));
            }
        }
        assert_eq!(linked[0].1, vec![0, 1]);
        assert_eq!(linked[1].1, vec![2, 3]);
        assert_eq!(gg.logical_edge_count(), 4 * 2 + 8 + 4);
    }

    #[test]
    fn spine_distances() {
        let gg = build_gadget(&inst(4, &[(1, -3), (2, 4), (-1, -4)])).unwrap();
        let u = gg.num_vars;
        for i in 0..u {
            for a in [i, u + i] {
                let d = shortest_distances(&gg.graph, a);
                for j in i + 1..u {
                    for b in [j, u + j] {
                        assert_eq!(d[b], (j - i) as f64);
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_satisfiability() {
        assert_eq!(max_satisfiable(&inst(1, &[(1, 1)])).unwrap(), 1);
        let (a, k) = best_assignment(&inst(2, &[(1, 2), (-1, -2)])).unwrap();
        assert_eq!(k, 2);
        assert_ne!(a[0], a[1]);
        assert_eq!(max_satisfiable(&inst(1, &[(1, 1), (-1, -1)])).unwrap(), 1);
        let big = Sat2Instance::new(21, vec![]).unwrap();
        assert!(matches!(max_satisfiable(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn full_spine_reads_all_true() {
        let gg = build_gadget(&inst(3, &[(1, 2)])).unwrap();
        let (a, p) = path_to_assignment(&gg, &Path::new(vec![0, 1, 2])).unwrap();
        assert_eq!(a, vec![true, true, true]);
        assert_eq!(p.vertices(), &[0, 1, 2]);
    }

    #[test]
    fn stripping_a_terminal_keeps_the_assignment() {
        let gg = build_gadget(&inst(3, &[])).unwrap();
        let s = 2 * 3;
        // s has no outgoing arcs, so the path runs into it: x1 -> s is not a
        // prefix; the path ending at t is.
        let t = 2 * 3 + 2;
        let with = Path::new(vec![0, 1, 2, t]);
        let without = Path::new(vec![0, 1, 2]);
        let (a1, _) = path_to_assignment(&gg, &with).unwrap();
        let (a2, _) = path_to_assignment(&gg, &without).unwrap();
        assert_eq!(a1, a2);
        let c = |p: &Path| gg.graph.centrality_with(p, NeighborRule::Incident).unwrap();
        assert_eq!(c(&without), c(&with) + 1);
        assert!(gg.graph.has_edge(0, s));
    }

    #[test]
    fn no_clauses_is_clean() {
        let r = verify_reduction(&inst(2, &[])).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.best_centrality, 2 + 4);
    }

    #[test]
    fn single_clause() {
        let r = verify_reduction(&inst(2, &[(1, 2)])).unwrap();
        assert_eq!(r.max_satisfiable, 1);
        assert!(r.best_centrality > 2 + 4);
        assert!(r.is_clean());
    }

    #[test]
    fn text_round_trip() {
        let text = "c sample\np sat2 3 2\n1 -2\n-3 1 0\n";
        let parsed: Sat2Instance = text.parse().unwrap();
        assert_eq!(parsed, inst(3, &[(1, -2), (-3, 1)]));
        assert_eq!(parsed.to_string().parse::<Sat2Instance>().unwrap(), parsed);
        assert!("p sat2 2 1\n1 3\n".parse::<Sat2Instance>().is_err());
        assert!("p sat2 2 2\n1 2\n".parse::<Sat2Instance>().is_err());
        assert!("1 2\n".parse::<Sat2Instance>().is_err());
    }

    #[test]
    fn too_large_for_verification() {
        let r = verify_reduction(&Sat2Instance::new(7, vec![]).unwrap());
        assert!(matches!(r, Err(Error::TooLarge(_))));
    }
}
