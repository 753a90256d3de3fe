use std::collections::BTreeMap;

use super::{spins_from_code, SolverKind, SolverResult};
use crate::error::{Error, Result};
use crate::subproblem::IsingSubproblem;

/// Largest subproblem the enumerator accepts.
pub const MAX_EXACT_VARIABLES: usize = 30;

/// Visits all `2^k` assignments in reflected Gray-code order.
///
/// `visit` receives the big-endian bit code of each assignment (bit `k-1-a`
/// set means `sigma_a = -1`) together with its objective, maintained by an
/// O(k) local-field update per step.
pub(crate) fn gray_walk(sp: &IsingSubproblem, mut visit: impl FnMut(u64, f64)) {
    let k = sp.len();
    let coupling = sp.coupling_matrix();
    let mut sigma = vec![1.0f64; k];
    // local field of spin a: h_a + sum_b J_ab sigma_b
    let mut field: Vec<f64> = (0..k)
        .map(|a| sp.fields()[a] + coupling[a * k..(a + 1) * k].iter().sum::<f64>())
        .collect();
    let mut value = sp.objective_unchecked(&vec![1; k]);
    let mut code = 0u64;
    visit(code, value);

    for step in 1..1u64 << k {
        let bit = step.trailing_zeros() as usize;
        let a = k - 1 - bit;
        value -= 2.0 * sigma[a] * field[a];
        sigma[a] = -sigma[a];
        code ^= 1 << bit;
        let delta = 2.0 * sigma[a];
        for (f, j) in field.iter_mut().zip(&coupling[a * k..(a + 1) * k]) {
            *f += delta * j;
        }
        visit(code, value);
    }
}

/// Global maximizer by exhaustive enumeration.
///
/// Among assignments whose objectives agree to rounding, the one with the
/// smallest big-endian code wins, so e.g. `(+1, -1)` beats `(-1, +1)`.
pub fn solve_exact(sp: &IsingSubproblem) -> Result<SolverResult> {
    let k = sp.len();
    if k > MAX_EXACT_VARIABLES {
        return Err(Error::TooManyVariables {
            k,
            max: MAX_EXACT_VARIABLES,
        });
    }
    let scale = 1.0
        + sp.fields().iter().map(|h| h.abs()).sum::<f64>()
        + sp.couplings().iter().map(|c| c.value.abs()).sum::<f64>();
    let tie = 1e-11 * scale;

    let mut best_code = 0u64;
    let mut best_value = f64::NEG_INFINITY;
    gray_walk(sp, |code, value| {
        if value > best_value + tie || (value >= best_value - tie && code < best_code) {
            best_code = code;
            best_value = value;
        }
    });

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("states".to_owned(), (1u64 << k) as f64);
    SolverResult::new(
        sp,
        spins_from_code(best_code, k),
        SolverKind::Exact,
        diagnostics,
    )
}
