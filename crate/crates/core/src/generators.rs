//! Seeded random graph models.
//!
//! All randomness comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). The xoshiro256++ step on state
//! `s[0..4]` is
//!
//! ```text
//! out  = rotl(s0 + s3, 23) + s0
//! t    = s1 << 17
//! s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
//! ```
//!
//! Floats in `[0, 1)` are `(next_u64 >> 11) * 2^-53`; bounded integers use
//! Lemire's widening multiply with rejection. Both conversions are defined
//! here, so a seed yields the same graph on every platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub struct SeededRng(Xoshiro256PlusPlus);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let range = bound as u64;
        let threshold = range.wrapping_neg() % range;
        loop {
            let m = (self.next_u64() as u128) * (range as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Ring lattice with `k` nearest neighbors, each edge rewired with probability `p`.
    WattsStrogatz { k: usize, p: f64 },
    /// Preferential attachment, `m` edges per new vertex.
    BarabasiAlbert { m: usize },
    /// Each vertex pair present independently with probability `edge_prob`.
    UniformRandom { edge_prob: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Self {
        Self {
            model: Model::WattsStrogatz { k, p },
            n,
            seed,
        }
    }

    pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Self {
        Self {
            model: Model::BarabasiAlbert { m },
            n,
            seed,
        }
    }

    pub fn uniform_random(n: usize, edge_prob: f64, seed: u64) -> Self {
        Self {
            model: Model::UniformRandom { edge_prob },
            n,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
        match self.model {
            Model::WattsStrogatz { k, p } => {
                if k % 2 != 0 {
                    return bad(format!("k must be even, got {k}"));
                }
                if !prob_ok(p) {
                    return bad(format!("rewiring probability {p} outside [0, 1]"));
                }
                if self.n <= k {
                    return bad(format!("need n > k, got n={} k={k}", self.n));
                }
            }
            Model::BarabasiAlbert { m } => {
                if m < 1 || m >= self.n {
                    return bad(format!("need 1 <= m < n, got m={m} n={}", self.n));
                }
            }
            Model::UniformRandom { edge_prob } => {
                if !prob_ok(edge_prob) {
                    return bad(format!("edge probability {edge_prob} outside [0, 1]"));
                }
            }
        }
        Ok(())
    }

    /// Label without the seed, shared by every repetition of a setting.
    pub fn setting(&self) -> String {
        match self.model {
            Model::WattsStrogatz { k, p } => format!("ws(n={},k={k},p={p})", self.n),
            Model::BarabasiAlbert { m } => format!("ba(n={},m={m})", self.n),
            Model::UniformRandom { edge_prob } => format!("uniform(n={},p={edge_prob})", self.n),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            Model::WattsStrogatz { k, p } => {
                write!(f, "ws:n={},k={k},p={p},seed={}", self.n, self.seed)
            }
            Model::BarabasiAlbert { m } => write!(f, "ba:n={},m={m},seed={}", self.n, self.seed),
            Model::UniformRandom { edge_prob } => {
                write!(f, "uniform:n={},p={edge_prob},seed={}", self.n, self.seed)
            }
        }
    }
}

/// Parses `ws:n=100,k=4,p=0.1`, `ba:n=100,m=2` or `uniform:n=20,p=0.2`,
/// each with an optional `seed=` field (default 0).
impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSpec(format!("{msg} in `{s}`"));
        let (model, rest) = s.split_once(':').ok_or_else(|| bad("missing `model:`"))?;
        let mut n = None;
        let (mut k, mut p, mut m, mut seed) = (None, None, None, 0u64);
        for field in rest.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            let int = || value.parse::<usize>().map_err(|_| bad("bad integer"));
            match key.trim() {
                "n" => n = Some(int()?),
                "k" => k = Some(int()?),
                "m" => m = Some(int()?),
                "p" | "edge_prob" => {
                    p = Some(value.parse::<f64>().map_err(|_| bad("bad probability"))?)
                }
                "seed" => seed = value.parse().map_err(|_| bad("bad seed"))?,
                _ => return Err(bad("unknown field")),
            }
        }
        let n = n.ok_or_else(|| bad("missing n"))?;
        let model = match model.trim() {
            "ws" | "watts_strogatz" => Model::WattsStrogatz {
                k: k.ok_or_else(|| bad("missing k"))?,
                p: p.ok_or_else(|| bad("missing p"))?,
            },
            "ba" | "barabasi_albert" => Model::BarabasiAlbert {
                m: m.ok_or_else(|| bad("missing m"))?,
            },
            "uniform" | "uniform_random" => Model::UniformRandom {
                edge_prob: p.ok_or_else(|| bad("missing p"))?,
            },
            _ => return Err(bad("unknown model")),
        };
        let spec = GenSpec { model, n, seed };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    match spec.model {
        Model::WattsStrogatz { .. } => watts_strogatz(spec),
        Model::BarabasiAlbert { .. } => barabasi_albert(spec),
        Model::UniformRandom { .. } => uniform_random(spec),
    }
}

fn from_adjacency(adj: &[BTreeSet<usize>]) -> Graph {
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    Graph::new(adj.len(), edges, false).expect("generator produced a simple graph")
}

/// Ring lattice of `n` vertices each joined to its `k` nearest neighbors;
/// then, ring by ring (offset 1 up to `k/2`) and vertex by vertex, the edge
/// `(u, u+j)` is replaced with probability `p` by `(u, w)` for a uniformly
/// drawn `w` that is neither `u` nor already adjacent to `u`.
pub fn watts_strogatz(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let Model::WattsStrogatz { k, p } = spec.model else {
        return Err(Error::InvalidSpec("not a Watts-Strogatz spec".into()));
    };
    let n = spec.n;
    let mut rng = SeededRng::new(spec.seed);
    let mut adj = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.unit() >= p {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.below(n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    Ok(from_adjacency(&adj))
}

/// Starts from a star on `m + 1` vertices; every later vertex attaches to `m`
/// distinct existing vertices drawn with probability proportional to degree.
/// Produces `m * (n - m)` edges.
pub fn barabasi_albert(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let Model::BarabasiAlbert { m } = spec.model else {
        return Err(Error::InvalidSpec("not a Barabasi-Albert spec".into()));
    };
    let n = spec.n;
    let mut rng = SeededRng::new(spec.seed);
    let mut adj = vec![BTreeSet::new(); n];
    // degree-weighted pool: each vertex appears once per incident edge
    let mut pool = Vec::with_capacity(2 * m * n);
    for leaf in 1..=m {
        adj[0].insert(leaf);
        adj[leaf].insert(0);
        pool.extend([0, leaf]);
    }
    for source in m + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(pool[rng.below(pool.len())]);
        }
        for &t in &targets {
            adj[source].insert(t);
            adj[t].insert(source);
            pool.extend([t, source]);
        }
    }
    Ok(from_adjacency(&adj))
}

pub fn uniform_random(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let Model::UniformRandom { edge_prob } = spec.model else {
        return Err(Error::InvalidSpec("not a uniform random spec".into()));
    };
    let n = spec.n;
    let mut rng = SeededRng::new(spec.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::stats;

    #[test]
    fn lattice_without_rewiring() {
        let g = watts_strogatz(&GenSpec::watts_strogatz(100, 4, 0.0, 7)).unwrap();
        let s = stats(&g);
        assert_eq!((s.edge_count, s.max_degree, s.diameter), (200, 4, 25));
    }

    #[test]
    fn rewiring_preserves_edge_count() {
        for seed in 0..30 {
            let g = watts_strogatz(&GenSpec::watts_strogatz(100, 4, 0.1, seed)).unwrap();
            assert_eq!(g.edge_count(), 200);
        }
        let g = watts_strogatz(&GenSpec::watts_strogatz(10, 4, 1.0, 3)).unwrap();
        assert_eq!(g.edge_count(), 20);
    }

    #[test]
    fn ba_edge_counts() {
        for (n, expected) in [(100, 196), (500, 996)] {
            let g = barabasi_albert(&GenSpec::barabasi_albert(n, 2, 1)).unwrap();
            assert_eq!(g.edge_count(), expected);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        for spec in [
            GenSpec::watts_strogatz(50, 4, 0.2, 11),
            GenSpec::barabasi_albert(50, 2, 11),
            GenSpec::uniform_random(20, 0.3, 11),
        ] {
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a.edges(), b.edges());
        }
    }

    #[test]
    fn uniform_extremes() {
        assert_eq!(
            uniform_random(&GenSpec::uniform_random(6, 1.0, 0))
                .unwrap()
                .edge_count(),
            15
        );
        assert_eq!(
            uniform_random(&GenSpec::uniform_random(6, 0.0, 0))
                .unwrap()
                .edge_count(),
            0
        );
    }

    #[test]
    fn uniform_edge_count_within_binomial_interval() {
        // n=20 gives 190 pairs; Binomial(190, 0.2) has mean 38 and sd 5.51.
        // 3.29 sd covers 99.9%: [19.9, 56.1].
        for seed in 0..20 {
            let m = uniform_random(&GenSpec::uniform_random(20, 0.2, seed))
                .unwrap()
                .edge_count();
            assert!((20..=56).contains(&m), "seed {seed}: {m} edges");
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(GenSpec::watts_strogatz(10, 3, 0.1, 0).validate().is_err());
        assert!(GenSpec::watts_strogatz(4, 4, 0.1, 0).validate().is_err());
        assert!(GenSpec::watts_strogatz(10, 4, 1.5, 0).validate().is_err());
        assert!(GenSpec::barabasi_albert(5, 5, 0).validate().is_err());
        assert!(GenSpec::barabasi_albert(5, 0, 0).validate().is_err());
        assert!(GenSpec::uniform_random(5, -0.1, 0).validate().is_err());
    }

    #[test]
    fn parse_and_display() {
        let spec: GenSpec = "ws:n=100,k=4,p=0.1,seed=5".parse().unwrap();
        assert_eq!(spec, GenSpec::watts_strogatz(100, 4, 0.1, 5));
        assert_eq!(spec.to_string().parse::<GenSpec>().unwrap(), spec);
        assert_eq!(
            "ba:n=100,m=2".parse::<GenSpec>().unwrap(),
            GenSpec::barabasi_albert(100, 2, 0)
        );
        assert!("ba:n=100".parse::<GenSpec>().is_err());
        assert!("xx:n=1".parse::<GenSpec>().is_err());
    }

    #[test]
    fn below_is_in_range() {
        let mut rng = SeededRng::new(1);
        for bound in [1, 2, 3, 7, 1000] {
            for _ in 0..200 {
                assert!(rng.below(bound) < bound);
            }
        }
        let u = rng.unit();
        assert!((0.0..1.0).contains(&u));
    }
}
