//! Exhaustive bipartition search for a small graph, independent of the library.
//!
//! Fixes vertex 0 to `+1` and walks the remaining `2^(n-1)` sign patterns in
//! Gray-code order using a dense modularity matrix. Prints the best score.
//!
//! ```text
//! cargo run --release -p commdet --example karate_oracle -- crates/core/tests/data/karate.txt
//! ```

use std::collections::HashMap;

fn main() {
    let path = std::env::args()
        .nth(1)
        .expect("usage: karate_oracle EDGE_LIST");
    let text = std::fs::read_to_string(&path).expect("readable edge list");

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let mut t = line.split_whitespace();
        let mut id = |s: &str| {
            let next = index.len();
            *index.entry(s.to_owned()).or_insert(next)
        };
        let u = id(t.next().unwrap());
        let v = id(t.next().unwrap());
        if u != v && !edges.contains(&(u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    let n = index.len();
    let m = edges.len() as f64;
    assert!(
        n <= 40,
        "2^(n-1) enumeration is only practical for small graphs"
    );

    let mut degree = vec![0.0f64; n];
    for &(u, v) in &edges {
        degree[u] += 1.0;
        degree[v] += 1.0;
    }
    let mut b = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            b[i * n + j] = -degree[i] * degree[j] / (2.0 * m);
        }
    }
    for &(u, v) in &edges {
        b[u * n + v] += 1.0;
        b[v * n + u] += 1.0;
    }

    // sum_ij B_ij s_i s_j with all spins +1 is zero
    let mut s = vec![1.0f64; n];
    let mut field: Vec<f64> = (0..n).map(|i| (0..n).map(|j| b[i * n + j]).sum()).collect();
    let mut total = 0.0f64;
    let mut best = (0.0f64, 0u64);

    let free = n - 1;
    for step in 1..1u64 << free {
        let i = 1 + step.trailing_zeros() as usize;
        // flipping s_i changes the double sum by -4 s_i (field_i - B_ii s_i)
        total += -4.0 * s[i] * (field[i] - b[i * n + i] * s[i]);
        s[i] = -s[i];
        let delta = 2.0 * s[i];
        for (f, bij) in field.iter_mut().zip(&b[i * n..(i + 1) * n]) {
            *f += delta * bij;
        }
        if total > best.0 {
            best = (total, step ^ (step >> 1));
        }
    }

    // re-score the winner from scratch; the running total drifts over 2^(n-1) updates
    let spins: Vec<f64> = (0..n)
        .map(|i| {
            if i > 0 && best.1 >> (i - 1) & 1 == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    let mut direct = 0.0;
    for i in 0..n {
        for j in 0..n {
            direct += b[i * n + j] * spins[i] * spins[j];
        }
    }
    let q = direct / (4.0 * m);
    let members: Vec<usize> = (0..free)
        .filter(|bit| best.1 >> bit & 1 == 1)
        .map(|bit| bit + 1)
        .collect();
    println!("vertices {n}, edges {}", edges.len());
    println!("best modularity {q:.15}");
    println!("flipped dense indices {members:?}");
}
