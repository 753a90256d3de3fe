//! The outer local search: pick the highest-gain vertices, re-optimize them
//! with everything else frozen, keep the result if modularity improved.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modularity::{modularity, Partition};
use crate::solvers::{Backend, SubproblemSolver};
use crate::subproblem::{apply_solution, build_subproblem, select_subset};

/// Improvements smaller than this are not accepted.
pub const ACCEPT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub backend: Backend,
    pub subproblem_size: usize,
    pub max_iters: usize,
    /// Consecutive non-improving iterations before stopping.
    pub patience: usize,
    pub seed: u64,
}

impl SearchConfig {
    /// Defaults: subsets of 25, at most 500 iterations, patience 1 for the
    /// exact backend and 5 for the stochastic ones.
    pub fn new(backend: Backend, seed: u64) -> Self {
        let patience = if backend.is_stochastic() { 5 } else { 1 };
        Self {
            backend,
            subproblem_size: 25,
            max_iters: 500,
            patience,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.subproblem_size == 0 || self.max_iters == 0 || self.patience == 0 {
            return Err(Error::InvalidConfig(
                "subproblem_size, max_iters and patience must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub best_partition: Partition,
    pub best_modularity: f64,
    pub iterations: usize,
    pub solver_calls: usize,
    pub accepted_moves: usize,
    /// `(iteration, modularity)` after each accepted move, iterations counted from 1.
    pub modularity_trace: Vec<(usize, f64)>,
    pub wall_time_seconds: f64,
}

/// Independent uniform spins drawn from a generator seeded with `seed`.
pub fn initial_guess(g: &Graph, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Partition::from_bits((0..g.node_count()).map(|_| rng.random::<bool>()))
}

/// Runs the search with the backend named in `cfg`.
pub fn run_local_search(g: &Graph, cfg: &SearchConfig) -> Result<SearchReport> {
    run_local_search_with(g, cfg, &cfg.backend)
}

/// Runs the search with an arbitrary solver; `cfg.backend` is ignored.
///
/// Iteration `t` (from 0) calls the solver with seed `cfg.seed + t`.
pub fn run_local_search_with<S>(g: &Graph, cfg: &SearchConfig, solver: &S) -> Result<SearchReport>
where
    S: SubproblemSolver + ?Sized,
{
    cfg.validate()?;
    let start = Instant::now();

    let mut solution = initial_guess(g, cfg.seed);
    let mut score = modularity(g, &solution)?;
    let mut report = SearchReport {
        best_partition: solution.clone(),
        best_modularity: score,
        iterations: 0,
        solver_calls: 0,
        accepted_moves: 0,
        modularity_trace: Vec::new(),
        wall_time_seconds: 0.0,
    };

    let mut stale = 0;
    while report.iterations < cfg.max_iters && stale < cfg.patience {
        let subset = select_subset(g, &solution, cfg.subproblem_size)?;
        let sp = build_subproblem(g, &solution, &subset)?;
        let result = solver.solve(&sp, cfg.seed.wrapping_add(report.iterations as u64))?;
        report.solver_calls += 1;
        report.iterations += 1;

        let candidate = apply_solution(&solution, &subset, result.spins())?;
        let candidate_score = modularity(g, &candidate)?;
        if candidate_score > score + ACCEPT_TOLERANCE {
            solution = candidate;
            score = candidate_score;
            report.accepted_moves += 1;
            report.modularity_trace.push((report.iterations, score));
            stale = 0;
        } else {
            stale += 1;
        }
    }

    report.best_partition = solution;
    report.best_modularity = score;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::solvers::{AnnealConfig, QaoaConfig, SolverKind, SolverResult};
    use crate::subproblem::IsingSubproblem;

    fn barbell() -> Graph {
        parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3").unwrap()
    }

    #[test]
    fn initial_guess_is_deterministic() {
        let g = barbell();
        assert_eq!(initial_guess(&g, 9), initial_guess(&g, 9));
        assert_eq!(initial_guess(&g, 9).len(), 6);
    }

    #[test]
    fn initial_guess_is_balanced() {
        let g = Graph::from_edges(10, &[(0, 1)]).unwrap();
        let mut plus = [0usize; 10];
        for seed in 0..10_000 {
            for (i, &s) in initial_guess(&g, seed).spins().iter().enumerate() {
                plus[i] += (s == 1) as usize;
            }
        }
        for count in plus {
            assert!((count as f64 / 10_000.0 - 0.5).abs() < 0.02, "{count}");
        }
    }

    #[test]
    fn single_edge_reaches_zero() {
        let g = parse_edge_list("a b").unwrap();
        for seed in 0..4 {
            let r = run_local_search(&g, &SearchConfig::new(Backend::Exact, seed)).unwrap();
            assert_eq!(r.best_modularity, 0.0);
        }
    }

    #[test]
    fn barbell_full_subset() {
        let g = barbell();
        for seed in 0..5 {
            let mut cfg = SearchConfig::new(Backend::Exact, seed);
            cfg.subproblem_size = 6;
            let r = run_local_search(&g, &cfg).unwrap();
            assert!((r.best_modularity - 5.0 / 14.0).abs() < 1e-12);
            assert!(r.accepted_moves <= 1);
            assert!(r.solver_calls <= 2);
        }
    }

    #[test]
    fn stochastic_backends_run() {
        let g = barbell();
        let mut cfg = SearchConfig::new(Backend::Anneal(AnnealConfig::default()), 1);
        cfg.subproblem_size = 4;
        let r = run_local_search(&g, &cfg).unwrap();
        assert!(r.solver_calls >= 5);
        assert!(r.best_modularity > 0.0);

        cfg.backend = Backend::Qaoa(QaoaConfig {
            depth: 1,
            ..Default::default()
        });
        let r = run_local_search(&g, &cfg).unwrap();
        assert!((r.best_modularity - modularity(&g, &r.best_partition).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn qaoa_cap_propagates() {
        let g = barbell();
        let mut cfg = SearchConfig::new(
            Backend::Qaoa(QaoaConfig {
                max_qubits: 3,
                ..Default::default()
            }),
            0,
        );
        cfg.subproblem_size = 5;
        assert_eq!(
            run_local_search(&g, &cfg).unwrap_err(),
            Error::TooManyQubits { k: 5, max: 3 }
        );
    }

    #[test]
    fn invalid_config() {
        let mut cfg = SearchConfig::new(Backend::Exact, 0);
        cfg.patience = 0;
        assert!(run_local_search(&barbell(), &cfg).is_err());
    }

    struct Stubborn;

    impl SubproblemSolver for Stubborn {
        fn kind(&self) -> SolverKind {
            SolverKind::Anneal
        }

        // always proposes the all-minus assignment
        fn solve(&self, sp: &IsingSubproblem, _seed: u64) -> Result<SolverResult> {
            SolverResult::new(
                sp,
                vec![-1; sp.len()],
                SolverKind::Anneal,
                Default::default(),
            )
        }
    }

    #[test]
    fn custom_solver_and_patience() {
        let g = barbell();
        let mut cfg = SearchConfig::new(Backend::Exact, 3);
        cfg.patience = 3;
        cfg.subproblem_size = 2;
        let r = run_local_search_with(&g, &cfg, &Stubborn).unwrap();
        assert!(r.solver_calls >= 3);
        assert!(r.modularity_trace.windows(2).all(|w| w[0].1 < w[1].1));

        cfg.max_iters = 2;
        cfg.patience = 10;
        assert_eq!(
            run_local_search_with(&g, &cfg, &Stubborn)
                .unwrap()
                .solver_calls,
            2
        );
    }
}
