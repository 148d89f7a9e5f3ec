//! Synthetic inputs: directed Barabási–Albert graphs and replicated graphs.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`, so a seed
//! reproduces the same edge list on every platform.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

const SEED_RETRIES: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("m = {m} must lie in 1..={seed_size}")]
    InvalidM { m: usize, seed_size: usize },
    #[error("n = {n} is smaller than the seed size {seed_size}")]
    TooFewVertices { n: usize, seed_size: usize },
    #[error("seed mean degree {0} is not reachable with the seed size")]
    InvalidSeedDegree(f64),
    #[error("no connected seed graph after {0} attempts")]
    SeedNotConnected(usize),
    #[error("copies must be at least 1")]
    NoCopies,
    #[error("{requested} bridges requested, only {available} distinct ones exist")]
    TooManyBridges { requested: usize, available: usize },
    #[error("invalid keep rule {0:?}, expected log2, all or fixed:K")]
    InvalidKeepRule(String),
}

/// Number of incident edges a vertex keeps as out-edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum KeepRule {
    /// `⌈log₂ E⌉`, so a degree-1 vertex keeps nothing.
    #[default]
    Log2,
    /// `min(K, E)`.
    Fixed(usize),
    All,
}

impl KeepRule {
    pub fn keep(self, degree: usize) -> usize {
        match self {
            KeepRule::Log2 => ceil_log2(degree),
            KeepRule::Fixed(k) => k.min(degree),
            KeepRule::All => degree,
        }
    }
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

impl FromStr for KeepRule {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log2" => Ok(KeepRule::Log2),
            "all" => Ok(KeepRule::All),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|k| k.parse().ok())
                .map(KeepRule::Fixed)
                .ok_or_else(|| GenerateError::InvalidKeepRule(s.to_string())),
        }
    }
}

impl fmt::Display for KeepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeepRule::Log2 => write!(f, "log2"),
            KeepRule::Fixed(k) => write!(f, "fixed:{k}"),
            KeepRule::All => write!(f, "all"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub seed_size: usize,
    pub seed_mean_degree: f64,
    pub keep_rule: KeepRule,
    pub rng_seed: u64,
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, rng_seed: u64) -> Self {
        GeneratorConfig {
            n,
            m,
            seed_size: 20,
            seed_mean_degree: 5.0,
            keep_rule: KeepRule::Log2,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.m == 0 || self.m > self.seed_size {
            return Err(GenerateError::InvalidM {
                m: self.m,
                seed_size: self.seed_size,
            });
        }
        if self.n < self.seed_size {
            return Err(GenerateError::TooFewVertices {
                n: self.n,
                seed_size: self.seed_size,
            });
        }
        let d = self.seed_mean_degree;
        if !(d > 0.0) || d > (self.seed_size - 1) as f64 {
            return Err(GenerateError::InvalidSeedDegree(d));
        }
        Ok(())
    }
}

/// Undirected Barabási–Albert graph as adjacency lists.
fn undirected_ba(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<usize>>, GenerateError> {
    let s = config.seed_size;
    let mut adj = random_connected_seed(s, config.seed_mean_degree, rng)?;
    adj.resize(config.n, Vec::new());

    // every edge endpoint appears once, so sampling is proportional to degree
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * config.n * config.m);
    for (u, ns) in adj.iter().enumerate().take(s) {
        endpoints.extend(std::iter::repeat_n(u, ns.len()));
    }
    let mut targets = Vec::with_capacity(config.m);
    for v in s..config.n {
        targets.clear();
        while targets.len() < config.m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            adj[v].push(t);
            adj[t].push(v);
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Ok(adj)
}

fn random_connected_seed(s: usize, mean_degree: f64, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<usize>>, GenerateError> {
    let p = if s > 1 { mean_degree / (s - 1) as f64 } else { 0.0 };
    for _ in 0..SEED_RETRIES {
        let mut adj = vec![Vec::new(); s];
        for u in 0..s {
            for v in u + 1..s {
                if rng.random_bool(p) {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        if is_connected(&adj) {
            return Ok(adj);
        }
    }
    Err(GenerateError::SeedNotConnected(SEED_RETRIES))
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == adj.len()
}

/// Directed BA graph: each vertex keeps `keep_rule(E)` of its `E` incident
/// edges, chosen uniformly, as out-edges.
pub fn generate_ba(config: &GeneratorConfig) -> Result<Graph, GenerateError> {
    generate_ba_with_degrees(config).map(|(g, _)| g)
}

/// Like [`generate_ba`], also returning each vertex's undirected degree.
pub fn generate_ba_with_degrees(config: &GeneratorConfig) -> Result<(Graph, Vec<usize>), GenerateError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let adj = undirected_ba(config, &mut rng)?;
    let mut edges = Vec::new();
    for (u, ns) in adj.iter().enumerate() {
        let keep = config.keep_rule.keep(ns.len());
        for i in index::sample(&mut rng, ns.len(), keep) {
            edges.push((u, ns[i]));
        }
    }
    let degrees = adj.iter().map(Vec::len).collect();
    let g = Graph::from_edges(config.n, edges).expect("generated ids are in range");
    Ok((g, degrees))
}

/// Disjoint union of `copies` relabeled copies of `g` plus `bridges` random
/// edges between distinct copies.
pub fn replicate(g: &Graph, copies: usize, bridges: usize, rng_seed: u64) -> Result<Graph, GenerateError> {
    if copies == 0 {
        return Err(GenerateError::NoCopies);
    }
    let n = g.vertex_count();
    let total = n * copies;
    let available = total * (total - n);
    if bridges > available {
        return Err(GenerateError::TooManyBridges {
            requested: bridges,
            available,
        });
    }
    let mut edges = Vec::with_capacity(g.edge_count() * copies + bridges);
    for k in 0..copies {
        let base = k * n;
        edges.extend(g.edges().map(|(u, v)| (base + u, base + v)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut seen = HashSet::with_capacity(bridges);
    while seen.len() < bridges {
        let u = rng.random_range(0..total);
        let v = rng.random_range(0..total);
        if u / n != v / n && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(total, edges)
        .expect("replicated ids are in range")
        .with_loop_policy(g.loop_policy()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keep_rule_values() {
        assert_eq!(KeepRule::Log2.keep(24), 5);
        assert_eq!(KeepRule::Log2.keep(12), 4);
        assert_eq!(KeepRule::Log2.keep(1), 0);
        assert_eq!(KeepRule::Log2.keep(0), 0);
        assert_eq!(KeepRule::Log2.keep(2), 1);
        assert_eq!(KeepRule::Log2.keep(16), 4);
        assert_eq!(KeepRule::Log2.keep(17), 5);
        assert_eq!(KeepRule::Fixed(3).keep(2), 2);
        assert_eq!(KeepRule::All.keep(7), 7);
    }

    #[test]
    fn keep_rule_parsing() {
        assert_eq!("log2".parse(), Ok(KeepRule::Log2));
        assert_eq!("all".parse(), Ok(KeepRule::All));
        assert_eq!("fixed:1".parse(), Ok(KeepRule::Fixed(1)));
        assert!("fixed:x".parse::<KeepRule>().is_err());
        assert!("log10".parse::<KeepRule>().is_err());
        for r in [KeepRule::Log2, KeepRule::All, KeepRule::Fixed(4)] {
            assert_eq!(r.to_string().parse(), Ok(r));
        }
    }

    #[test]
    fn config_validation() {
        let mut c = GeneratorConfig::new(100, 21, 0);
        assert!(matches!(c.validate(), Err(GenerateError::InvalidM { .. })));
        c.m = 3;
        c.n = 10;
        assert!(matches!(c.validate(), Err(GenerateError::TooFewVertices { .. })));
        c.n = 100;
        c.seed_mean_degree = 25.0;
        assert!(matches!(c.validate(), Err(GenerateError::InvalidSeedDegree(_))));
    }

    #[test]
    fn seed_only() {
        let c = GeneratorConfig::new(20, 7, 9);
        let g = generate_ba(&c).unwrap();
        assert_eq!(g.vertex_count(), 20);
        assert!(g.edge_count() > 0);
    }

    #[test]
    fn replicate_rejects_zero_copies() {
        assert_eq!(replicate(&Graph::empty(3), 0, 0, 1).unwrap_err(), GenerateError::NoCopies);
        assert!(matches!(
            replicate(&Graph::empty(3), 1, 1, 1),
            Err(GenerateError::TooManyBridges { available: 0, .. })
        ));
    }
}
