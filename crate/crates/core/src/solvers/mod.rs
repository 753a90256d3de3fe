//! Interchangeable maximizers for [`IsingSubproblem`].
//!
//! Every backend takes `(subproblem, seed)` and hands back a [`SolverResult`]
//! whose objective is re-evaluated from the returned spins. New backends
//! plug in by implementing [`SubproblemSolver`].

mod anneal;
mod exact;
mod neldermead;
pub mod qaoa;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subproblem::IsingSubproblem;

pub use anneal::{solve_anneal, AnnealConfig};
pub use exact::{solve_exact, MAX_EXACT_VARIABLES};
pub use neldermead::{nelder_mead, NelderMeadResult};
pub use qaoa::{solve_qaoa, QaoaConfig, QaoaOptimizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Anneal,
    Qaoa,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Exact => "exact",
            SolverKind::Anneal => "anneal",
            SolverKind::Qaoa => "qaoa",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(SolverKind::Exact),
            "anneal" => Ok(SolverKind::Anneal),
            "qaoa" => Ok(SolverKind::Qaoa),
            other => Err(Error::InvalidConfig(format!("unknown backend `{other}`"))),
        }
    }
}

/// Outcome of one solver call.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    spins: Vec<i8>,
    objective: f64,
    kind: SolverKind,
    /// Backend-specific numbers (sweeps, optimized angles, sample probability, ...).
    pub diagnostics: BTreeMap<String, f64>,
}

impl SolverResult {
    /// Wraps `spins`, computing the objective from `sp` rather than trusting the caller.
    pub fn new(
        sp: &IsingSubproblem,
        spins: Vec<i8>,
        kind: SolverKind,
        diagnostics: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let objective = sp.objective(&spins)?;
        Ok(Self {
            spins,
            objective,
            kind,
            diagnostics,
        })
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn kind(&self) -> SolverKind {
        self.kind
    }
}

/// A subproblem backend.
pub trait SubproblemSolver {
    fn kind(&self) -> SolverKind;

    fn solve(&self, sp: &IsingSubproblem, seed: u64) -> Result<SolverResult>;
}

/// The built-in backends together with their settings.
#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Exact,
    Anneal(AnnealConfig),
    Qaoa(QaoaConfig),
}

impl Backend {
    /// The backend of the given kind with default settings.
    pub fn with_defaults(kind: SolverKind) -> Self {
        match kind {
            SolverKind::Exact => Backend::Exact,
            SolverKind::Anneal => Backend::Anneal(AnnealConfig::default()),
            SolverKind::Qaoa => Backend::Qaoa(QaoaConfig::default()),
        }
    }

    pub fn is_stochastic(&self) -> bool {
        !matches!(self, Backend::Exact)
    }
}

impl SubproblemSolver for Backend {
    fn kind(&self) -> SolverKind {
        match self {
            Backend::Exact => SolverKind::Exact,
            Backend::Anneal(_) => SolverKind::Anneal,
            Backend::Qaoa(_) => SolverKind::Qaoa,
        }
    }

    fn solve(&self, sp: &IsingSubproblem, seed: u64) -> Result<SolverResult> {
        match self {
            Backend::Exact => solve_exact(sp),
            Backend::Anneal(cfg) => solve_anneal(sp, cfg, seed),
            Backend::Qaoa(cfg) => solve_qaoa(sp, cfg, seed),
        }
    }
}

/// Spin vector for a big-endian bit encoding: bit `k-1-a` set means `sigma_a = -1`.
pub(crate) fn spins_from_code(code: u64, k: usize) -> Vec<i8> {
    (0..k)
        .map(|a| if code >> (k - 1 - a) & 1 == 1 { -1 } else { 1 })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trip() {
        for kind in [SolverKind::Exact, SolverKind::Anneal, SolverKind::Qaoa] {
            assert_eq!(kind.name().parse::<SolverKind>().unwrap(), kind);
        }
        assert!("gurobi".parse::<SolverKind>().is_err());
    }

    #[test]
    fn code_to_spins_is_big_endian() {
        assert_eq!(spins_from_code(0b01, 2), vec![1, -1]);
        assert_eq!(spins_from_code(0b100, 3), vec![-1, 1, 1]);
    }

    #[test]
    fn result_recomputes_objective() {
        let sp = IsingSubproblem::new(vec![1.0, -2.0], vec![]).unwrap();
        let r = SolverResult::new(&sp, vec![1, -1], SolverKind::Exact, BTreeMap::new()).unwrap();
        assert_eq!(r.objective(), 3.0);
    }
}
