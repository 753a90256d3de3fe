//! Bipartition modularity in spin form and single-vertex flip gains.
//!
//! With `B_ij = A_ij - k_i k_j / 2m` the score of a spin vector `s` is
//! `H = (1/4m) sum_ij B_ij s_i s_j`. Expanding the null-model term gives the
//! linear-time form `H = (1/4m) [ 2 sum_{(u,v) in E} s_u s_v - D^2 / 2m ]`
//! with `D = sum_i k_i s_i`.

use std::ops::Neg;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A two-community assignment, one spin in `{-1, +1}` per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition(Vec<i8>);

impl Partition {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin(bad));
        }
        Ok(Self(spins))
    }

    /// Every vertex in the `+1` community.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Spins from community membership flags (`true` maps to `-1`).
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Self(bits.into_iter().map(|b| if b { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn spin(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub(crate) fn spins_mut(&mut self) -> &mut [i8] {
        &mut self.0
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::DimensionMismatch {
                expected: g.node_count(),
                actual: self.len(),
            });
        }
        Ok(())
    }
}

impl Neg for &Partition {
    type Output = Partition;

    fn neg(self) -> Partition {
        Partition(self.0.iter().map(|s| -s).collect())
    }
}

/// `sum_i k_i s_i`.
pub(crate) fn degree_weighted_sum(g: &Graph, spins: &[i8]) -> f64 {
    g.degrees()
        .iter()
        .zip(spins)
        .map(|(&k, &s)| k as f64 * s as f64)
        .sum()
}

/// Modularity of the bipartition `p`, in `[-1, 1]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    p.check(g)?;
    let s = p.spins();
    let m = g.edge_count() as f64;
    let agree: i64 = g.edges().iter().map(|&(u, v)| (s[u] * s[v]) as i64).sum();
    let d = degree_weighted_sum(g, s);
    Ok((2.0 * agree as f64 - d * d / (2.0 * m)) / (4.0 * m))
}

/// Change in modularity if vertex `i` switched community.
pub fn vertex_gain(g: &Graph, p: &Partition, i: usize) -> Result<f64> {
    p.check(g)?;
    if i >= g.node_count() {
        return Err(Error::IndexOutOfRange {
            index: i,
            n: g.node_count(),
        });
    }
    let d = degree_weighted_sum(g, p.spins());
    Ok(gain_with_sum(g, p.spins(), i, d))
}

/// Flip gains of every vertex, sharing one pass for `sum_j k_j s_j`.
pub fn all_gains(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    p.check(g)?;
    let s = p.spins();
    let d = degree_weighted_sum(g, s);
    Ok((0..g.node_count())
        .map(|i| gain_with_sum(g, s, i, d))
        .collect())
}

// gain_i = -(s_i / m) * sum_{j != i} B_ij s_j
fn gain_with_sum(g: &Graph, s: &[i8], i: usize, d: f64) -> f64 {
    let m = g.edge_count() as f64;
    let k = g.degree(i) as f64;
    if k == 0.0 {
        return 0.0;
    }
    let si = s[i] as f64;
    let adj: i64 = g.neighbors(i).iter().map(|&j| s[j] as i64).sum();
    let row = adj as f64 - k / (2.0 * m) * (d - k * si);
    -si / m * row
}
