//! Classical simulated annealing with single-spin Metropolis updates.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SolverKind, SolverResult};
use crate::error::{Error, Result};
use crate::subproblem::IsingSubproblem;

/// Annealing schedule. Temperatures left as `None` are derived from the instance:
/// `t_initial = max_a (|h_a| + sum_b |J_ab|)` and `t_final = 1e-3 * t_initial`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    pub sweeps: usize,
    pub restarts: usize,
    pub t_initial: Option<f64>,
    pub t_final: Option<f64>,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            sweeps: 1000,
            restarts: 10,
            t_initial: None,
            t_final: None,
        }
    }
}

impl AnnealConfig {
    fn temperatures(&self, sp: &IsingSubproblem) -> Result<(f64, f64)> {
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(Error::InvalidConfig(
                "sweeps and restarts must be at least 1".into(),
            ));
        }
        let t_initial = match self.t_initial {
            Some(t) => t,
            None => {
                let scale = sp.max_local_scale();
                if scale > 0.0 {
                    scale
                } else {
                    1.0
                }
            }
        };
        let t_final = self.t_final.unwrap_or(1e-3 * t_initial);
        if !(t_final > 0.0 && t_final < t_initial && t_initial.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < t_final < t_initial, got t_initial={t_initial}, t_final={t_final}"
            )));
        }
        Ok((t_initial, t_final))
    }
}

/// Best configuration seen over `restarts` independent chains.
///
/// Restart `r` draws from its own generator seeded with `seed + r`, so the
/// outcome depends only on `(sp, cfg, seed)`.
pub fn solve_anneal(sp: &IsingSubproblem, cfg: &AnnealConfig, seed: u64) -> Result<SolverResult> {
    if sp.is_empty() {
        return Err(Error::EmptySubset);
    }
    let (t_initial, t_final) = cfg.temperatures(sp)?;
    let k = sp.len();
    let coupling = sp.coupling_matrix();
    let ratio = if cfg.sweeps > 1 {
        (t_final / t_initial).powf(1.0 / (cfg.sweeps - 1) as f64)
    } else {
        1.0
    };

    let mut best: Option<(Vec<i8>, f64, usize)> = None;
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let mut sigma: Vec<f64> = (0..k)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let mut field: Vec<f64> = (0..k)
            .map(|a| {
                sp.fields()[a]
                    + coupling[a * k..(a + 1) * k]
                        .iter()
                        .zip(&sigma)
                        .map(|(j, s)| j * s)
                        .sum::<f64>()
            })
            .collect();
        let as_spins = |sigma: &[f64]| sigma.iter().map(|&s| s as i8).collect::<Vec<i8>>();
        let mut value = sp.objective_unchecked(&as_spins(&sigma));
        let mut chain_best = (sigma.clone(), value);

        let mut temperature = t_initial;
        for _ in 0..cfg.sweeps {
            for a in 0..k {
                let delta = -2.0 * sigma[a] * field[a];
                if delta >= 0.0 || rng.random::<f64>() < (delta / temperature).exp() {
                    sigma[a] = -sigma[a];
                    value += delta;
                    let step = 2.0 * sigma[a];
                    for (f, j) in field.iter_mut().zip(&coupling[a * k..(a + 1) * k]) {
                        *f += step * j;
                    }
                    if value > chain_best.1 {
                        chain_best = (sigma.clone(), value);
                    }
                }
            }
            temperature *= ratio;
        }

        let spins = as_spins(&chain_best.0);
        let exact_value = sp.objective_unchecked(&spins);
        if best.as_ref().is_none_or(|b| exact_value > b.1) {
            best = Some((spins, exact_value, restart));
        }
    }

    let (spins, _, best_restart) = best.expect("at least one restart");
    let diagnostics = BTreeMap::from([
        ("sweeps".to_owned(), cfg.sweeps as f64),
        ("restarts".to_owned(), cfg.restarts as f64),
        ("t_initial".to_owned(), t_initial),
        ("t_final".to_owned(), t_final),
        ("best_restart".to_owned(), best_restart as f64),
    ]);
    SolverResult::new(sp, spins, SolverKind::Anneal, diagnostics)
}
