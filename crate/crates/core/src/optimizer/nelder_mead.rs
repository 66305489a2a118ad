//! Budgeted Nelder-Mead minimization.

/// Outcome of one simplex run.
#[derive(Clone, Debug, PartialEq)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Every evaluation that improved on the best value so far, in order.
    pub improvements: Vec<(Vec<f64>, f64)>,
    /// The evaluation cap was reached before the simplex collapsed.
    pub hit_budget: bool,
}

/// Minimizes `f` from `x0` with initial simplex offsets `steps`.
///
/// Stops when the simplex values agree within `ftol` and its vertices lie
/// within `xtol` of the best one, or after `max_evals` evaluations. `f` must
/// map NaN-producing points to a large finite value itself.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], steps: &[f64], max_evals: usize, xtol: f64, ftol: f64) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut improvements = Vec::new();
    let mut eval = |x: &[f64], evals: &mut usize, best: &mut Option<(Vec<f64>, f64)>| -> f64 {
        *evals += 1;
        let v = f(x);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            *best = Some((x.to_vec(), v));
            improvements.push((x.to_vec(), v));
        }
        v
    };

    if max_evals == 0 || n == 0 {
        let v = if max_evals == 0 {
            f64::INFINITY
        } else {
            eval(x0, &mut evals, &mut best)
        };
        return NmResult {
            x: x0.to_vec(),
            value: v,
            evaluations: evals,
            improvements,
            hit_budget: max_evals == 0,
        };
    }

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        simplex.push(v);
    }
    let mut values = Vec::with_capacity(n + 1);
    for v in &simplex {
        if evals >= max_evals {
            break;
        }
        values.push(eval(v, &mut evals, &mut best));
    }

    let mut hit_budget = values.len() < simplex.len();
    while !hit_budget {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = (values[n] - values[0]).abs();
        let size = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= ftol && size <= xtol {
            break;
        }
        if evals >= max_evals {
            hit_budget = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|j| centroid[j] + t * (simplex[n][j] - centroid[j]))
                .collect()
        };

        let xr = along(-1.0);
        let fr = eval(&xr, &mut evals, &mut best);
        if fr < values[0] {
            if evals >= max_evals {
                simplex[n] = xr;
                values[n] = fr;
                continue;
            }
            let xe = along(-2.0);
            let fe = eval(&xe, &mut evals, &mut best);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        if evals >= max_evals {
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let x = along(-0.5);
            let v = eval(&x, &mut evals, &mut best);
            (x, v)
        } else {
            let x = along(0.5);
            let v = eval(&x, &mut evals, &mut best);
            (x, v)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            if evals >= max_evals {
                break;
            }
            let x: Vec<f64> = (0..n)
                .map(|j| simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]))
                .collect();
            values[i] = eval(&x, &mut evals, &mut best);
            simplex[i] = x;
        }
    }

    let (x, value) = best.expect("at least one evaluation");
    NmResult {
        x,
        value,
        evaluations: evals,
        improvements,
        hit_budget,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2);
        let r = nelder_mead(f, &[0.0, 0.0], &[0.5, 0.5], 2000, 1e-10, 1e-14);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] + 2.0).abs() < 1e-6, "{r:?}");
        assert!(!r.hit_budget);
        assert!(r.improvements.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], &[0.3, 0.3], 5000, 1e-10, 1e-16);
        assert!(r.value < 1e-10, "{r:?}");
    }

    #[test]
    fn budget_is_respected() {
        let mut calls = 0;
        let r = nelder_mead(
            |x: &[f64]| {
                calls += 1;
                x.iter().map(|v| v * v).sum()
            },
            &[3.0, 3.0, 3.0],
            &[1.0, 1.0, 1.0],
            17,
            0.0,
            0.0,
        );
        assert_eq!(r.evaluations, 17);
        assert_eq!(calls, 17);
        assert!(r.hit_budget);
    }
}
