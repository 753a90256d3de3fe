//! Two-way community detection by modularity maximization.
//!
//! A local search repeatedly frees the vertices with the largest flip gain,
//! turns the rest of the graph into boundary fields of a small Ising problem
//! and hands that problem to a pluggable backend: exhaustive enumeration,
//! simulated annealing or a simulated QAOA circuit.

pub mod error;
pub mod experiment;
pub mod graph;
pub mod modularity;
pub mod search;
pub mod solvers;
pub mod subproblem;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, read_edge_list, Graph};
pub use modularity::{all_gains, modularity, vertex_gain, Partition};
pub use search::{
    initial_guess, run_local_search, run_local_search_with, SearchConfig, SearchReport,
};
pub use solvers::{
    solve_anneal, solve_exact, solve_qaoa, AnnealConfig, Backend, QaoaConfig, QaoaOptimizer,
    SolverKind, SolverResult, SubproblemSolver,
};
pub use subproblem::{
    apply_solution, build_subproblem, select_subset, subproblem_objective, IsingSubproblem,
};
