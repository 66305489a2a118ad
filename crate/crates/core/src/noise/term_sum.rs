//! Closed-form noisy sculpted density matrix, written term by term.
//!
//! The sixteen terms pair the four input paths of output level `n` with the
//! four of level `m`. The reference closed form uses the opposite carrier
//! phase sign, so carrier phases enter negated. The coefficient of the
//! (n−1, m+1) pair is taken with a plus sign, as fixed by the
//! master-equation oracle (see `term_sum_matches_path_expansion`).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::elements::AbcdTable;
use super::{NoiseParams, PulseAngles};

struct Factors {
    c1: f64,
    s1: f64,
    c3: f64,
    s3: f64,
    e1: Complex64,
    e2: Complex64,
    e3: Complex64,
    jc: AbcdTable,
}

impl Factors {
    fn new(a: &PulseAngles, p: &NoiseParams) -> Self {
        let (t1, t2, t3) = a.durations(p);
        let k1 = (-2.0 * p.gamma * p.omega * p.omega * t1).exp();
        let k3 = (-2.0 * p.gamma * p.omega * p.omega * t3).exp();
        let (s1, c1) = (2.0 * a.omega_t1).sin_cos();
        let (s3, c3) = (2.0 * a.omega_t3).sin_cos();
        Self {
            c1: c1 * k1,
            s1: s1 * k1,
            c3: c3 * k3,
            s3: s3 * k3,
            e1: Complex64::from_polar(1.0, -a.phi1),
            e2: Complex64::from_polar(1.0, a.phi2),
            e3: Complex64::from_polar(1.0, -a.phi3),
            jc: AbcdTable::new(t2, p),
        }
    }
}

/// Unnormalized ρ_{n,m} from input amplitudes `lam` (zero outside its range).
pub fn term_sum_element(lam: &[Complex64], n: usize, m: usize, a: &PulseAngles, p: &NoiseParams) -> Complex64 {
    term_sum(lam, n, m, &Factors::new(a, p))
}

fn term_sum(lam: &[Complex64], n: usize, m: usize, f: &Factors) -> Complex64 {
    let l = |k: i64| -> Complex64 {
        if k >= 0 && (k as usize) < lam.len() {
            lam[k as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let (ni, mi) = (n as i64, m as i64);
    let lc = |a: i64, b: i64| l(a) * l(b).conj();
    let Factors {
        c1,
        s1,
        c3,
        s3,
        e1,
        e2,
        e3,
        jc,
    } = f;
    let (c1, s1, c3, s3) = (*c1, *s1, *c3, *s3);
    let (e1, e2, e3) = (*e1, *e2, *e3);
    let i = Complex64::i();
    let (a, b, c, d) = (
        |x, y| jc.a(x, y),
        |x, y| jc.b(x, y),
        |x, y| jc.c(x, y),
        |x, y| jc.d(x, y),
    );
    let dn = if n == 0 { 0.0 } else { 1.0 };
    let dm = if m == 0 { 0.0 } else { 1.0 };

    let mut v = Complex64::new(0.0, 0.0);
    if n > 0 && m > 0 {
        v += lc(ni - 1, mi - 1) / 8.0 * (1.0 - c3) * (a(n, m) - b(n, m)) * (1.0 + c1) * dn * dm;
    }
    if n > 0 {
        v += lc(ni - 1, mi + 1) * e3 / 8.0 * s3 * e2.powi(-2) * (-a(n, m + 1) + b(n, m + 1)) * e1 * s1 * dn;
        v += lc(ni - 1, mi) * i / 8.0 * (1.0 - c3) * e2.conj() * (-c(n, m) - d(n, m)) * e1 * s1 * dn;
        v += lc(ni - 1, mi) * i * e3 / 8.0 * s3 * e2.conj() * (c(n, m + 1) + d(n, m + 1)) * (1.0 + c1) * dn;
    }
    if m > 0 {
        v +=
            lc(ni + 1, mi - 1) * e3.conj() / 8.0 * s3 * e2.powi(2) * (-a(n + 1, m) + b(n + 1, m)) * e1.conj() * s1 * dm;
    }
    v += lc(ni + 1, mi + 1) / 8.0 * (1.0 + c3) * (a(n + 1, m + 1) - b(n + 1, m + 1)) * (1.0 - c1);
    v += lc(ni + 1, mi) * i * e3.conj() / 8.0 * s3 * e2 * (c(n + 1, m) + d(n + 1, m)) * (1.0 - c1);
    v -= lc(ni + 1, mi) * i / 8.0 * (1.0 + c3) * e2 * (c(n + 1, m + 1) + d(n + 1, m + 1)) * e1.conj() * s1;
    if m > 0 {
        v -= lc(ni, mi - 1) * i / 8.0 * (1.0 - c3) * e2 * (c(n, m) - d(n, m)) * e1.conj() * s1 * dm;
    }
    v -= lc(ni, mi + 1) * i * e3 / 8.0 * s3 * e2.conj() * (-c(n, m + 1) + d(n, m + 1)) * (1.0 - c1);
    v += lc(ni, mi) / 8.0 * (1.0 - c3) * (a(n, m) + b(n, m)) * (1.0 - c1);
    v -= lc(ni, mi) * e3 / 8.0 * s3 * (a(n, m + 1) + b(n, m + 1)) * e1.conj() * s1;
    if m > 0 {
        v += lc(ni, mi - 1) * i * e3.conj() / 8.0 * s3 * e2 * (c(n + 1, m) - d(n + 1, m)) * (1.0 + c1) * dm;
    }
    v += lc(ni, mi + 1) * i / 8.0 * (1.0 + c3) * e2.conj() * (-c(n + 1, m + 1) + d(n + 1, m + 1)) * e1 * s1;
    v -= lc(ni, mi) * e3.conj() / 8.0 * s3 * (a(n + 1, m) + b(n + 1, m)) * e1 * s1;
    v += lc(ni, mi) / 8.0 * (1.0 + c3) * (a(n + 1, m + 1) + b(n + 1, m + 1)) * (1.0 + c1);
    v
}

/// Unnormalized ρ over levels `0..=n_max` from input amplitudes `lam`.
pub fn term_sum_matrix(lam: &[Complex64], a: &PulseAngles, p: &NoiseParams, n_max: usize) -> DMatrix<Complex64> {
    let f = Factors::new(a, p);
    DMatrix::from_fn(n_max + 1, n_max + 1, |n, m| term_sum(lam, n, m, &f))
}
