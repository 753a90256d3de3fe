//! QAOA on a dense statevector.
//!
//! Qubit `a` carries spin `sigma_a`; basis index bit `k-1-a` set means
//! `sigma_a = -1` (the same big-endian code the exact solver uses). One layer
//! multiplies every amplitude by `exp(-i gamma C(z))` and then rotates each
//! qubit by `exp(-i beta X)`. Angles are laid out `[gamma_1, beta_1, gamma_2, ...]`.
//! The expectation of `C` is maximized directly.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::exact::gray_walk;
use super::neldermead::nelder_mead;
use super::{spins_from_code, SolverKind, SolverResult};
use crate::error::{Error, Result};
use crate::subproblem::IsingSubproblem;

/// Statevectors above this size are refused regardless of configuration.
const QUBIT_HARD_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaoaOptimizer {
    /// Layer-by-layer grid seeding followed by Nelder-Mead over all angles.
    GridThenNelderMead,
    GridOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaConfig {
    /// Number of cost/mixer layer pairs.
    pub depth: usize,
    pub samples: usize,
    pub optimizer: QaoaOptimizer,
    /// Grid resolution for each of `gamma` in `[0, pi)` and `beta` in `[0, pi/2)`.
    pub grid_points_per_angle: usize,
    pub max_qubits: usize,
    /// Nelder-Mead stops when the simplex is smaller than this (radians).
    pub simplex_tolerance: f64,
    /// Nelder-Mead evaluation budget.
    pub max_refine_evals: usize,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        Self {
            depth: 2,
            samples: 1024,
            optimizer: QaoaOptimizer::GridThenNelderMead,
            grid_points_per_angle: 8,
            max_qubits: 20,
            simplex_tolerance: 1e-4,
            max_refine_evals: 200,
        }
    }
}

impl QaoaConfig {
    fn validate(&self) -> Result<()> {
        if self.depth == 0 || self.samples == 0 || self.grid_points_per_angle == 0 {
            return Err(Error::InvalidConfig(
                "qaoa depth, samples and grid points must be at least 1".into(),
            ));
        }
        if self.max_qubits > QUBIT_HARD_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "max_qubits {} exceeds the supported {QUBIT_HARD_LIMIT}",
                self.max_qubits
            )));
        }
        Ok(())
    }
}

/// Dense `2^k` amplitude register.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|+>^k`.
    pub fn uniform(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            qubits,
            amplitudes: vec![amp; dim],
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Multiplies amplitude `z` by `exp(-i gamma cost[z])`.
    pub fn apply_cost_phase(&mut self, cost: &[f64], gamma: f64) {
        for (amp, &c) in self.amplitudes.iter_mut().zip(cost) {
            *amp *= Complex64::cis(-gamma * c);
        }
    }

    /// Applies `exp(-i beta X)` to every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (sin, cos) = beta.sin_cos();
        let minus_i_sin = Complex64::new(0.0, -sin);
        for q in 0..self.qubits {
            let stride = 1usize << q;
            for block in self.amplitudes.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * cos + x1 * minus_i_sin;
                    *a1 = x0 * minus_i_sin + x1 * cos;
                }
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `sum_z |amp(z)|^2 cost[z]`.
    pub fn expectation(&self, cost: &[f64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(cost)
            .map(|(a, c)| a.norm_sqr() * c)
            .sum()
    }
}

/// The cost diagonal of a subproblem plus circuit evaluation.
#[derive(Debug, Clone)]
pub struct QaoaSimulator {
    qubits: usize,
    cost: Vec<f64>,
}

impl QaoaSimulator {
    pub fn new(sp: &IsingSubproblem, max_qubits: usize) -> Result<Self> {
        let k = sp.len();
        if k > max_qubits.min(QUBIT_HARD_LIMIT) {
            return Err(Error::TooManyQubits { k, max: max_qubits });
        }
        let mut cost = vec![0.0; 1usize << k];
        gray_walk(sp, |code, value| cost[code as usize] = value);
        Ok(Self { qubits: k, cost })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// `C(z)` for each basis index.
    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    /// Runs the layers in `angles`, calling `after_layer` with the state after each.
    pub fn evolve_with(
        &self,
        angles: &[f64],
        mut after_layer: impl FnMut(usize, &Statevector),
    ) -> Statevector {
        assert!(
            angles.len().is_multiple_of(2),
            "angles come in (gamma, beta) pairs"
        );
        let mut state = Statevector::uniform(self.qubits);
        for (layer, pair) in angles.chunks_exact(2).enumerate() {
            state.apply_cost_phase(&self.cost, pair[0]);
            state.apply_mixer(pair[1]);
            after_layer(layer, &state);
        }
        state
    }

    pub fn state(&self, angles: &[f64]) -> Statevector {
        self.evolve_with(angles, |_, _| {})
    }

    pub fn expectation(&self, angles: &[f64]) -> f64 {
        self.state(angles).expectation(&self.cost)
    }
}

/// Result of the classical angle search.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSearch {
    pub angles: Vec<f64>,
    pub expectation: f64,
    pub evaluations: usize,
    /// Best expectation seen after each evaluation.
    pub best_so_far: Vec<f64>,
}

/// Maximizes the expectation over `2 * depth` angles.
///
/// Layer `l` is seeded by a grid search over its own `(gamma, beta)` with the
/// earlier layers fixed at their chosen values; Nelder-Mead then refines all
/// angles jointly. The returned angles are the best evaluated anywhere.
pub fn optimize_angles(sim: &QaoaSimulator, cfg: &QaoaConfig) -> AngleSearch {
    let grid = cfg.grid_points_per_angle;
    let gamma_step = PI / grid as f64;
    let beta_step = PI / 2.0 / grid as f64;

    let mut best_so_far = Vec::new();
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    let mut record = |angles: &[f64], value: f64, best: &mut (Vec<f64>, f64)| {
        if value > best.1 {
            *best = (angles.to_vec(), value);
        }
        best_so_far.push(best.1);
    };

    let mut seeded: Vec<f64> = Vec::with_capacity(2 * cfg.depth);
    for _ in 0..cfg.depth {
        let mut layer_best = (0.0, 0.0, f64::NEG_INFINITY);
        let mut trial = seeded.clone();
        trial.extend([0.0, 0.0]);
        for i in 0..grid {
            for j in 0..grid {
                let (gamma, beta) = (i as f64 * gamma_step, j as f64 * beta_step);
                let n = trial.len();
                trial[n - 2] = gamma;
                trial[n - 1] = beta;
                let value = sim.expectation(&trial);
                if seeded.len() + 2 == 2 * cfg.depth {
                    record(&trial, value, &mut best);
                }
                if value > layer_best.2 {
                    layer_best = (gamma, beta, value);
                }
            }
        }
        seeded.extend([layer_best.0, layer_best.1]);
    }

    if cfg.optimizer == QaoaOptimizer::GridThenNelderMead {
        let steps: Vec<f64> = (0..cfg.depth)
            .flat_map(|_| [gamma_step / 2.0, beta_step / 2.0])
            .collect();
        nelder_mead(
            |x| {
                let value = sim.expectation(x);
                record(x, value, &mut best);
                -value
            },
            &seeded,
            &steps,
            cfg.simplex_tolerance,
            cfg.max_refine_evals,
        );
    }

    AngleSearch {
        angles: best.0,
        expectation: best.1,
        evaluations: best_so_far.len(),
        best_so_far,
    }
}

/// Optimizes the circuit, samples `cfg.samples` bitstrings and returns the
/// sampled assignment with the highest exactly evaluated objective.
pub fn solve_qaoa(sp: &IsingSubproblem, cfg: &QaoaConfig, seed: u64) -> Result<SolverResult> {
    cfg.validate()?;
    let sim = QaoaSimulator::new(sp, cfg.max_qubits)?;
    let search = optimize_angles(&sim, cfg);

    let mut norm_drift = 0.0f64;
    let state = sim.evolve_with(&search.angles, |_, s| {
        norm_drift = norm_drift.max((s.norm_sqr() - 1.0).abs());
    });
    let probabilities = state.probabilities();
    let sampler = WeightedIndex::new(&probabilities)
        .map_err(|e| Error::InvalidConfig(format!("degenerate statevector: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let sampled: BTreeSet<usize> = (0..cfg.samples).map(|_| sampler.sample(&mut rng)).collect();
    let k = sp.len();
    let distinct = sampled.len();
    let mut best_code = None::<(usize, f64)>;
    // ascending code order, so strict improvement keeps the smallest code among ties
    for code in sampled {
        let value = sp.objective_unchecked(&spins_from_code(code as u64, k));
        if best_code.is_none_or(|(_, v)| value > v) {
            best_code = Some((code, value));
        }
    }
    let (code, _) = best_code.expect("at least one sample");

    let mut diagnostics = BTreeMap::from([
        ("depth".to_owned(), cfg.depth as f64),
        ("samples".to_owned(), cfg.samples as f64),
        ("distinct_samples".to_owned(), distinct as f64),
        ("expectation".to_owned(), search.expectation),
        ("evaluations".to_owned(), search.evaluations as f64),
        ("best_sample_probability".to_owned(), probabilities[code]),
        ("norm_drift".to_owned(), norm_drift),
    ]);
    for (l, pair) in search.angles.chunks_exact(2).enumerate() {
        diagnostics.insert(format!("gamma_{}", l + 1), pair[0]);
        diagnostics.insert(format!("beta_{}", l + 1), pair[1]);
    }
    SolverResult::new(
        sp,
        spins_from_code(code as u64, k),
        SolverKind::Qaoa,
        diagnostics,
    )
}
