//! Restricting the global problem to a small set of free vertices.
//!
//! Vertices outside the subset `X` keep their current spins and enter the
//! reduced problem only through linear fields. For a spin assignment `sigma`
//! over `X` the reduced objective is
//!
//! ```text
//! Q(sigma) = sum_{a<b} J_ab sigma_a sigma_b + sum_a h_a sigma_a
//! J_ab = 2 B(X[a], X[b])
//! h_a  = sum_{j not in X} 2 B(X[a], j) s_j
//! ```
//!
//! and `modularity = (Q(sigma) + offset) / 4m` holds exactly for the combined
//! partition, where `offset` collects the diagonal of `X` and every term that
//! involves only frozen vertices.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modularity::{all_gains, Partition};

/// One nonzero pairwise term `value * sigma_a * sigma_b`, with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub a: usize,
    pub b: usize,
    pub value: f64,
}

/// A quadratic objective over `k` spins to be maximized.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingSubproblem {
    subset: Vec<usize>,
    couplings: Vec<Coupling>,
    fields: Vec<f64>,
    offset: f64,
    edge_count: usize,
}

impl IsingSubproblem {
    /// A standalone instance not tied to any graph: the subset is `0..k`,
    /// the offset is zero and [`Self::modularity_of`] is meaningless.
    ///
    /// Zero couplings are dropped. Pairs must satisfy `a < b < k` and appear once.
    pub fn new(fields: Vec<f64>, couplings: Vec<Coupling>) -> Result<Self> {
        let k = fields.len();
        if k == 0 {
            return Err(Error::EmptySubset);
        }
        let mut couplings: Vec<Coupling> =
            couplings.into_iter().filter(|c| c.value != 0.0).collect();
        for c in &couplings {
            if c.a >= c.b || c.b >= k {
                return Err(Error::InvalidConfig(format!(
                    "coupling ({}, {}) must satisfy a < b < {k}",
                    c.a, c.b
                )));
            }
        }
        couplings.sort_by_key(|c| (c.a, c.b));
        if let Some(w) = couplings
            .windows(2)
            .find(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b))
        {
            return Err(Error::InvalidConfig(format!(
                "coupling ({}, {}) given twice",
                w[0].a, w[0].b
            )));
        }
        Ok(Self {
            subset: (0..k).collect(),
            couplings,
            fields,
            offset: 0.0,
            edge_count: 0,
        })
    }

    /// Number of free spins.
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Symmetric row-major `k x k` coupling matrix with a zero diagonal.
    pub fn coupling_matrix(&self) -> Vec<f64> {
        let k = self.len();
        let mut j = vec![0.0; k * k];
        for c in &self.couplings {
            j[c.a * k + c.b] = c.value;
            j[c.b * k + c.a] = c.value;
        }
        j
    }

    /// `max_a (|h_a| + sum_b |J_ab|)`, the largest single-spin energy scale.
    pub fn max_local_scale(&self) -> f64 {
        let mut scale: Vec<f64> = self.fields.iter().map(|h| h.abs()).collect();
        for c in &self.couplings {
            scale[c.a] += c.value.abs();
            scale[c.b] += c.value.abs();
        }
        scale.into_iter().fold(0.0, f64::max)
    }

    /// Evaluates the reduced objective for `sigma`.
    pub fn objective(&self, sigma: &[i8]) -> Result<f64> {
        if sigma.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: sigma.len(),
            });
        }
        if let Some(&bad) = sigma.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin(bad));
        }
        Ok(self.objective_unchecked(sigma))
    }

    pub(crate) fn objective_unchecked(&self, sigma: &[i8]) -> f64 {
        let pair: f64 = self
            .couplings
            .iter()
            .map(|c| c.value * (sigma[c.a] * sigma[c.b]) as f64)
            .sum();
        let linear: f64 = self
            .fields
            .iter()
            .zip(sigma)
            .map(|(h, &s)| h * s as f64)
            .sum();
        pair + linear
    }

    /// Modularity of the full partition whose free part scores `objective`.
    pub fn modularity_of(&self, objective: f64) -> f64 {
        (objective + self.offset) / (4.0 * self.edge_count as f64)
    }
}

/// Evaluates `sp` at `sigma`.
pub fn subproblem_objective(sp: &IsingSubproblem, sigma: &[i8]) -> Result<f64> {
    sp.objective(sigma)
}

/// The `min(k, n)` vertices with the largest flip gain, best first.
///
/// Ties go to the smaller index. Negative-gain vertices fill the subset when
/// there are not enough improving ones.
pub fn select_subset(g: &Graph, p: &Partition, k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "subset size must be at least 1".into(),
        ));
    }
    let gains = all_gains(g, p)?;
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    // gains are finite; partial_cmp keeps -0.0 and 0.0 tied so the index decides
    order.sort_by(|&a, &b| {
        gains[b]
            .partial_cmp(&gains[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(k.min(g.node_count()));
    Ok(order)
}

/// Builds the reduced problem over `subset` with every other spin of `p` frozen.
pub fn build_subproblem(g: &Graph, p: &Partition, subset: &[usize]) -> Result<IsingSubproblem> {
    let n = g.node_count();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: p.len(),
        });
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut position = vec![usize::MAX; n];
    for (a, &v) in subset.iter().enumerate() {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
        if position[v] != usize::MAX {
            return Err(Error::DuplicateVertex(v));
        }
        position[v] = a;
    }

    let s = p.spins();
    let k = subset.len();
    let m2 = 2.0 * g.edge_count() as f64;
    let free = |v: usize| position[v] != usize::MAX;

    let frozen_degree_sum: f64 = (0..n)
        .filter(|&v| !free(v))
        .map(|v| g.degree(v) as f64 * s[v] as f64)
        .sum();

    let mut fields = Vec::with_capacity(k);
    let mut adjacent = vec![false; k * k];
    for (a, &v) in subset.iter().enumerate() {
        let mut frozen_neighbors = 0i64;
        for &u in g.neighbors(v) {
            match position[u] {
                usize::MAX => frozen_neighbors += s[u] as i64,
                b => adjacent[a * k + b] = true,
            }
        }
        let kv = g.degree(v) as f64;
        fields.push(2.0 * (frozen_neighbors as f64 - kv / m2 * frozen_degree_sum));
    }

    let mut couplings = Vec::new();
    for a in 0..k {
        let ka = g.degree(subset[a]) as f64;
        for b in a + 1..k {
            let kb = g.degree(subset[b]) as f64;
            let adj = if adjacent[a * k + b] { 1.0 } else { 0.0 };
            let value = 2.0 * (adj - ka * kb / m2);
            if value != 0.0 {
                couplings.push(Coupling { a, b, value });
            }
        }
    }

    let free_diagonal: f64 = subset
        .iter()
        .map(|&v| -((g.degree(v) * g.degree(v)) as f64) / m2)
        .sum();
    let frozen_agree: i64 = g
        .edges()
        .iter()
        .filter(|&&(u, v)| !free(u) && !free(v))
        .map(|&(u, v)| (s[u] * s[v]) as i64)
        .sum();
    let frozen_block = 2.0 * frozen_agree as f64 - frozen_degree_sum * frozen_degree_sum / m2;

    Ok(IsingSubproblem {
        subset: subset.to_vec(),
        couplings,
        fields,
        offset: free_diagonal + frozen_block,
        edge_count: g.edge_count(),
    })
}

/// Copy of `p` with the subset's spins replaced by `sigma`.
pub fn apply_solution(p: &Partition, subset: &[usize], sigma: &[i8]) -> Result<Partition> {
    if sigma.len() != subset.len() {
        return Err(Error::DimensionMismatch {
            expected: subset.len(),
            actual: sigma.len(),
        });
    }
    let mut out = p.clone();
    let spins = out.spins_mut();
    for (&v, &s) in subset.iter().zip(sigma) {
        if v >= spins.len() {
            return Err(Error::IndexOutOfRange {
                index: v,
                n: spins.len(),
            });
        }
        if s != 1 && s != -1 {
            return Err(Error::InvalidSpin(s));
        }
        spins[v] = s;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::modularity::{dense, modularity};
    use proptest::prelude::*;

    #[test]
    fn whole_graph_has_no_fields() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n2 3").unwrap();
        let p = Partition::new(vec![1, -1, 1, -1]).unwrap();
        let sp = build_subproblem(&g, &p, &[0, 1, 2, 3]).unwrap();
        assert!(sp.fields().iter().all(|&h| h == 0.0));
        let sum_sq: f64 = g.degrees().iter().map(|&k| (k * k) as f64).sum();
        assert!((sp.offset() + sum_sq / 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_hand_expansion() {
        let g = parse_edge_list("0 1").unwrap();
        let p = Partition::uniform(2);
        let sp = build_subproblem(&g, &p, &[0]).unwrap();
        assert!(sp.couplings().is_empty());
        assert_eq!(sp.fields(), &[1.0]);
        assert_eq!(sp.offset(), -1.0);
        assert_eq!(sp.objective(&[-1]).unwrap(), -1.0);
        assert_eq!(sp.modularity_of(1.0), 0.0);
        assert_eq!(sp.modularity_of(-1.0), -0.5);
    }

    #[test]
    fn zero_problem_scores_zero() {
        let sp = IsingSubproblem::new(vec![0.0; 3], vec![]).unwrap();
        assert_eq!(sp.objective(&[1, -1, 1]).unwrap(), 0.0);
        assert_eq!(sp.objective(&[-1, -1, -1]).unwrap(), 0.0);
    }

    #[test]
    fn triangle_tie_break() {
        let g = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!(
            select_subset(&g, &Partition::uniform(3), 2).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            select_subset(&g, &Partition::uniform(3), 10).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn unique_best_vertex() {
        // 0 sits alone in its community while all its neighbours are on the other side.
        let g = parse_edge_list("0 1\n0 2\n1 2\n2 3\n3 4\n4 5\n5 3").unwrap();
        let p = Partition::new(vec![-1, 1, 1, 1, -1, -1]).unwrap();
        let gains = all_gains(&g, &p).unwrap();
        let best = (0..6)
            .max_by(|&a, &b| gains[a].total_cmp(&gains[b]))
            .unwrap();
        assert!(gains
            .iter()
            .enumerate()
            .all(|(i, &x)| i == best || x < gains[best]));
        assert_eq!(select_subset(&g, &p, 1).unwrap(), vec![best]);
    }

    #[test]
    fn apply_solution_cases() {
        let p = Partition::new(vec![1, -1, 1, 1]).unwrap();
        assert_eq!(apply_solution(&p, &[1, 3], &[-1, 1]).unwrap(), p);
        let all = apply_solution(&p, &[0, 1, 2, 3], &[-1, -1, -1, 1]).unwrap();
        assert_eq!(all.spins(), &[-1, -1, -1, 1]);
        let part = apply_solution(&p, &[2], &[-1]).unwrap();
        assert_eq!(part.spins(), &[1, -1, -1, 1]);
        assert!(matches!(
            apply_solution(&p, &[0], &[1, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn errors() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        let p = Partition::uniform(3);
        assert_eq!(build_subproblem(&g, &p, &[]), Err(Error::EmptySubset));
        assert_eq!(
            build_subproblem(&g, &p, &[1, 1]),
            Err(Error::DuplicateVertex(1))
        );
        assert!(matches!(
            build_subproblem(&g, &p, &[3]),
            Err(Error::IndexOutOfRange { .. })
        ));
        let sp = build_subproblem(&g, &p, &[0, 2]).unwrap();
        assert!(matches!(
            sp.objective(&[1]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(IsingSubproblem::new(vec![], vec![]).is_err());
        assert!(IsingSubproblem::new(
            vec![0.0; 2],
            vec![Coupling {
                a: 1,
                b: 0,
                value: 1.0
            }]
        )
        .is_err());
    }

    #[test]
    fn couplings_match_dense_b() {
        let g = parse_edge_list("0 1\n1 2\n2 3\n3 0\n0 2\n4 5\n5 0").unwrap();
        let b = dense::b_matrix(&g);
        let p = Partition::new(vec![1, -1, 1, -1, 1, 1]).unwrap();
        let subset = [4, 0, 2];
        let sp = build_subproblem(&g, &p, &subset).unwrap();
        let j = sp.coupling_matrix();
        for a in 0..3 {
            for c in 0..3 {
                let want = if a == c {
                    0.0
                } else {
                    2.0 * b[subset[a]][subset[c]]
                };
                assert!((j[a * 3 + c] - want).abs() < 1e-15);
            }
            let h: f64 = (0..6)
                .filter(|v| !subset.contains(v))
                .map(|v| 2.0 * b[subset[a]][v] * p.spin(v) as f64)
                .sum();
            assert!((sp.fields()[a] - h).abs() < 1e-12);
        }
    }

    fn case() -> impl Strategy<Value = (Graph, Vec<i8>, Vec<usize>, Vec<i8>, Vec<i8>)> {
        (2usize..30)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    prop::collection::vec((0..n, 0..n), 1..80),
                    prop::collection::vec(prop::bool::ANY, n),
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                    1..=n,
                )
            })
            .prop_flat_map(|(n, edges, bits, order, k)| {
                (
                    Just((n, edges, bits, order[..k].to_vec())),
                    prop::collection::vec(prop::bool::ANY, k),
                    prop::collection::vec(prop::bool::ANY, k),
                )
            })
            .prop_filter_map("needs an edge", |((n, edges, bits, subset), s1, s2)| {
                let g = Graph::from_edges(n, &edges).ok()?;
                let spin = |v: Vec<bool>| {
                    v.into_iter()
                        .map(|b| if b { 1 } else { -1 })
                        .collect::<Vec<i8>>()
                };
                Some((g, spin(bits), subset, spin(s1), spin(s2)))
            })
    }

    proptest! {
        #[test]
        fn consistency_identity((g, s, subset, s1, s2) in case()) {
            let p = Partition::new(s).unwrap();
            let sp = build_subproblem(&g, &p, &subset).unwrap();
            let q1 = modularity(&g, &apply_solution(&p, &subset, &s1).unwrap()).unwrap();
            let q2 = modularity(&g, &apply_solution(&p, &subset, &s2).unwrap()).unwrap();
            let o1 = sp.objective(&s1).unwrap();
            let o2 = sp.objective(&s2).unwrap();
            let m4 = 4.0 * g.edge_count() as f64;
            prop_assert!((q1 - sp.modularity_of(o1)).abs() < 1e-10);
            prop_assert!(((q1 - q2) - (o1 - o2) / m4).abs() < 1e-10);
        }

        #[test]
        fn subset_is_gain_sorted_prefix((g, s, _subset, _a, _b) in case(), k in 1usize..40) {
            let p = Partition::new(s).unwrap();
            let x = select_subset(&g, &p, k).unwrap();
            let gains = all_gains(&g, &p).unwrap();
            prop_assert_eq!(x.len(), k.min(g.node_count()));
            let mut uniq = x.clone();
            uniq.sort();
            uniq.dedup();
            prop_assert_eq!(uniq.len(), x.len());
            let worst_taken = x.iter().map(|&v| gains[v]).fold(f64::INFINITY, f64::min);
            for (v, &gain) in gains.iter().enumerate() {
                if !x.contains(&v) {
                    prop_assert!(gain <= worst_taken);
                }
            }
            for w in x.windows(2) {
                prop_assert!(gains[w[0]] > gains[w[1]] || (gains[w[0]] == gains[w[1]] && w[0] < w[1]));
            }
        }
    }
}
