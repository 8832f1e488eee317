//! Seeded synthetic network generators for benchmarks and fixtures.
//!
//! The generator is a self-contained SplitMix64 stream so that a given seed
//! produces the same graph on every platform and toolchain; fixture-locked
//! tests depend on that stability.

use crate::net::Network;

/// SplitMix64 pseudo-random stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [0, bound).
    pub fn next_below(&mut self, bound: usize) -> usize {
        (self.next_f64() * bound as f64) as usize % bound
    }
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Directed Erdős–Rényi graph: each ordered pair is an edge with probability
/// `mean_out_degree / (n − 1)`.
pub fn erdos_renyi(n: usize, mean_out_degree: f64, seed: u64) -> Network {
    assert!(n >= 2, "need at least 2 nodes");
    let p = (mean_out_degree / (n - 1) as f64).clamp(0.0, 1.0);
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for s in 0..n {
        for d in 0..n {
            if s != d && rng.next_f64() < p {
                edges.push((s, d));
            }
        }
    }
    Network::new(labels(n), edges).expect("generated edges are clean by construction")
}

/// Complete directed graph: every ordered pair is an edge.
pub fn complete(n: usize) -> Network {
    assert!(n >= 2, "need at least 2 nodes");
    let mut edges = Vec::with_capacity(n * (n - 1));
    for s in 0..n {
        for d in 0..n {
            if s != d {
                edges.push((s, d));
            }
        }
    }
    Network::new(labels(n), edges).expect("complete graph is clean by construction")
}

/// Scale-free graph by preferential attachment.
///
/// Starts from a small bidirectional clique; each new node attaches to
/// `m` distinct existing nodes chosen with probability proportional to
/// in-degree + 1, adding edges in both directions ("airline style" hubs).
pub fn scale_free(n: usize, m: usize, seed: u64) -> Network {
    let m = m.max(1);
    let core = (m + 1).min(n);
    let mut rng = SplitMix64::new(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut in_degree = vec![0usize; n];
    for s in 0..core {
        for d in 0..core {
            if s != d {
                edges.push((s, d));
                in_degree[d] += 1;
            }
        }
    }
    for v in core..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        let total: usize = (0..v).map(|u| in_degree[u] + 1).sum();
        while chosen.len() < m.min(v) {
            let mut ticket = rng.next_below(total);
            let mut pick = 0;
            for u in 0..v {
                let weight = in_degree[u] + 1;
                if ticket < weight {
                    pick = u;
                    break;
                }
                ticket -= weight;
            }
            if !chosen.contains(&pick) {
                chosen.push(pick);
            }
        }
        for &u in &chosen {
            edges.push((v, u));
            edges.push((u, v));
            in_degree[u] += 1;
            in_degree[v] += 1;
        }
    }
    Network::new(labels(n), edges).expect("attachment edges are clean by construction")
}
