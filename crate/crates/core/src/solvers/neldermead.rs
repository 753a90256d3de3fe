//! Derivative-free simplex minimization.

/// Best point found by [`nelder_mead`].
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` starting from `x0` with an initial simplex of per-axis `steps`.
///
/// Stops once the largest vertex distance from the best vertex drops below
/// `tolerance` or after `max_evals` evaluations. The returned point is the
/// best one ever evaluated, never worse than `x0`.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    tolerance: f64,
    max_evals: usize,
) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert_eq!(steps.len(), dim, "one step per coordinate");
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(x0, &mut evaluations);
    simplex.push((x0.to_vec(), v0));
    for i in 0..dim {
        if evaluations >= max_evals {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }

    let by_value = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| a.1.total_cmp(&b.1);

    while simplex.len() == dim + 1 && evaluations < max_evals {
        simplex.sort_by(by_value);
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| distance(x, &simplex[0].0))
            .fold(0.0, f64::max);
        if diameter < tolerance {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-1.0);
        let fr = eval(&reflected, &mut evaluations);
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = if evaluations < max_evals {
                eval(&expanded, &mut evaluations)
            } else {
                f64::INFINITY
            };
            simplex[dim] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        if evaluations >= max_evals {
            if fr < worst.1 {
                simplex[dim] = (reflected, fr);
            }
            break;
        }
        let (contracted, fc) = if fr < worst.1 {
            let x = along(-0.5);
            let v = eval(&x, &mut evaluations);
            (x, v)
        } else {
            let x = along(0.5);
            let v = eval(&x, &mut evaluations);
            (x, v)
        };
        if fc < worst.1.min(fr) {
            simplex[dim] = (contracted, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if evaluations >= max_evals {
                break;
            }
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            let v = eval(&x, &mut evaluations);
            *vertex = (x, v);
        }
    }

    let (x, value) = simplex.into_iter().min_by(by_value).unwrap();
    NelderMeadResult {
        x,
        value,
        evaluations,
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
