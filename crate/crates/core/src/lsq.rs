//! Small dense Levenberg-Marquardt for real residual vectors.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq)]
pub struct LmResult {
    pub x: Vec<f64>,
    /// Sum of squared residuals at `x`.
    pub cost: f64,
    pub iterations: usize,
}

/// Minimises |r(x)|^2 starting at `x0`, with a central-difference Jacobian.
pub fn levenberg_marquardt<F>(r: F, x0: &[f64], max_iter: usize) -> LmResult
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let cost_of = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>();
    let mut x = x0.to_vec();
    let mut res = r(&x);
    let mut cost = cost_of(&res);
    let mut mu = 1e-3;
    let mut it = 0;
    while it < max_iter && cost.is_finite() && cost > 1e-32 {
        it += 1;
        let m = res.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = 1e-7 * (1.0 + x[j].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (r(&xp), r(&xm));
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rv = DVector::from_vec(res.clone());
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * rv;
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += mu * (1.0 + jtj[(k, k)]);
            }
            let Some(step) = a.lu().solve(&(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rn = r(&xn);
            let cn = cost_of(&rn);
            if cn.is_finite() && cn < cost {
                let small = step.norm() <= 1e-15 * (1.0 + DVector::from_vec(x.clone()).norm());
                x = xn;
                res = rn;
                cost = cn;
                mu = (mu / 3.0).max(1e-15);
                improved = !small;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    LmResult {
        x,
        cost,
        iterations: it,
    }
}
