#![allow(dead_code)]

use std::path::PathBuf;

use commdet::subproblem::Coupling;
use commdet::{Graph, IsingSubproblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Erdos-Renyi graph on `n` vertices, redrawn until it has an edge.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let p: f64 = rng.random_range(0.05..0.6);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(g) = Graph::from_edges(n, &edges) {
            return g;
        }
    }
}

pub fn random_spins(rng: &mut ChaCha8Rng, n: usize) -> Vec<i8> {
    (0..n)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect()
}

/// Dense instance, couplings and fields uniform in `[-1, 1]`.
pub fn random_instance(rng: &mut ChaCha8Rng, k: usize) -> IsingSubproblem {
    let fields = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut couplings = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            couplings.push(Coupling {
                a,
                b,
                value: rng.random_range(-1.0..1.0),
            });
        }
    }
    IsingSubproblem::new(fields, couplings).unwrap()
}

/// `sum_ij B_ij s_i s_j / 4m` straight from the adjacency and degrees.
pub fn dense_modularity(g: &Graph, s: &[i8]) -> f64 {
    let n = g.node_count();
    let m = g.edge_count() as f64;
    let mut adjacency = vec![0.0f64; n * n];
    for &(u, v) in g.edges() {
        adjacency[u * n + v] = 1.0;
        adjacency[v * n + u] = 1.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let b = adjacency[i * n + j] - (g.degree(i) * g.degree(j)) as f64 / (2.0 * m);
            total += b * (s[i] * s[j]) as f64;
        }
    }
    total / (4.0 * m)
}

/// Best bipartition modularity over all `2^(n-1)` sign classes (vertex 0 fixed to +1).
pub fn brute_force_modularity(g: &Graph) -> f64 {
    let n = g.node_count();
    let mut best = f64::NEG_INFINITY;
    for code in 0..1u64 << (n - 1) {
        let s: Vec<i8> = (0..n)
            .map(|i| {
                if i > 0 && code >> (i - 1) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        best = best.max(dense_modularity(g, &s));
    }
    best
}

/// Objective evaluated term by term from the instance's public parts.
pub fn naive_objective(sp: &IsingSubproblem, sigma: &[i8]) -> f64 {
    let mut value = 0.0;
    for (a, h) in sp.fields().iter().enumerate() {
        value += h * sigma[a] as f64;
    }
    for c in sp.couplings() {
        value += c.value * (sigma[c.a] * sigma[c.b]) as f64;
    }
    value
}

/// Maximum of [`naive_objective`] over all `2^k` assignments, counting in plain binary.
pub fn naive_max(sp: &IsingSubproblem) -> f64 {
    let k = sp.len();
    (0..1u64 << k)
        .map(|code| {
            let sigma: Vec<i8> = (0..k)
                .map(|a| if code >> a & 1 == 1 { -1 } else { 1 })
                .collect();
            naive_objective(sp, &sigma)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
