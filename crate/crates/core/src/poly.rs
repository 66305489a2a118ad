//! Complex polynomial roots via companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of `sum coeffs[k] z^k` (ascending order).
///
/// Leading coefficients that are negligible relative to the largest one
/// are dropped first, so a nominal quartic whose top terms cancel is
/// solved as the lower-degree polynomial it really is.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Vec::new();
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() <= 1e-13 * scale {
        deg -= 1;
    }
    match deg {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        _ => {
            let lead = coeffs[deg];
            let mut m = DMatrix::<Complex64>::zeros(deg, deg);
            for i in 1..deg {
                m[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..deg {
                m[(i, deg - 1)] = -coeffs[i] / lead;
            }
            match m.schur().eigenvalues() {
                Some(ev) => ev.iter().copied().collect(),
                None => Vec::new(),
            }
        }
    }
}

/// Evaluates the polynomial at `z` (Horner).
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        // (z - 1)(z + 2i) = z^2 + (2i - 1) z - 2i
        let p = [c(0.0, -2.0), c(-1.0, 2.0), c(1.0, 0.0)];
        let mut r = roots(&p);
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0.0, -2.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quartic_residuals() {
        let p = [c(1.0, 0.5), c(-2.0, 0.0), c(0.3, -1.0), c(0.0, 2.0), c(1.5, 0.0)];
        let r = roots(&p);
        assert_eq!(r.len(), 4);
        for z in r {
            assert!(eval(&p, z).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn degree_drops() {
        let p = [c(2.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)];
        let r = roots(&p);
        assert_eq!(r.len(), 1);
        assert!((r[0] + 2.0).norm() < 1e-12);
        assert!(roots(&[c(1.0, 0.0)]).is_empty());
        assert!(roots(&[c(0.0, 0.0), c(0.0, 0.0)]).is_empty());
    }
}
