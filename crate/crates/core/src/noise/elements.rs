//! Averaged products of noisy pulse amplitudes.
//!
//! Intensity noise makes each pulse act for an effective time `t' = t + x`
//! with `x ~ N(0, Γt)`. Every transition amplitude of a carrier or JC pulse
//! is a constant times `cos(ωt')` or `sin(ωt')`, so the average of a product
//! of two amplitudes reduces to damped trigonometric terms in the sum and
//! difference frequencies, each damped by `exp(−Γ t d² / 2)`.

use num_complex::Complex64;

use super::NoiseParams;
use crate::error::{Result, SculptError};
use crate::fock::Spin;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Trig {
    Cos,
    Sin,
}

/// `coef * trig(freq * t')`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Amplitude {
    pub coef: Complex64,
    pub freq: f64,
    pub trig: Trig,
}

/// Damped cos/sin of the difference and sum frequencies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DampedPair {
    pub cm: f64,
    pub cp: f64,
    pub sm: f64,
    pub sp: f64,
}

impl DampedPair {
    pub fn new(a: f64, b: f64, t: f64, gamma: f64) -> Self {
        let dm = a - b;
        let dp = a + b;
        let em = (-gamma * t * dm * dm / 2.0).exp();
        let ep = (-gamma * t * dp * dp / 2.0).exp();
        let (sdm, cdm) = (dm * t).sin_cos();
        let (sdp, cdp) = (dp * t).sin_cos();
        Self {
            cm: cdm * em,
            cp: cdp * ep,
            sm: sdm * em,
            sp: sdp * ep,
        }
    }

    /// E[f(a t') g(b t')] for f, g in {cos, sin}.
    pub fn product(&self, f: Trig, g: Trig) -> f64 {
        match (f, g) {
            (Trig::Cos, Trig::Cos) => 0.5 * (self.cm + self.cp),
            (Trig::Cos, Trig::Sin) => 0.5 * (self.sp - self.sm),
            (Trig::Sin, Trig::Cos) => 0.5 * (self.sp + self.sm),
            (Trig::Sin, Trig::Sin) => 0.5 * (self.cm - self.cp),
        }
    }
}

/// E[x(t') conj(y(t'))] over the pulse-time noise.
pub(crate) fn averaged(x: &Amplitude, y: &Amplitude, t: f64, gamma: f64) -> Complex64 {
    x.coef * y.coef.conj() * DampedPair::new(x.freq, y.freq, t, gamma).product(x.trig, y.trig)
}

/// Carrier amplitude for `j → k` (motion untouched).
pub(crate) fn carrier_amplitude(j: Spin, k: Spin, phi: f64, omega: f64) -> Amplitude {
    let i = Complex64::i();
    let (coef, trig) = match (j, k) {
        (Spin::Up, Spin::Up) | (Spin::Down, Spin::Down) => (Complex64::new(1.0, 0.0), Trig::Cos),
        (Spin::Up, Spin::Down) => (-i * Complex64::from_polar(1.0, phi), Trig::Sin),
        (Spin::Down, Spin::Up) => (-i * Complex64::from_polar(1.0, -phi), Trig::Sin),
    };
    Amplitude {
        coef,
        freq: omega,
        trig,
    }
}

/// JC amplitude from `|n, j⟩` to spin `k` (the Fock index follows: ↓→↑ lowers, ↑→↓ raises).
pub(crate) fn jc_amplitude(n: usize, j: Spin, k: Spin, phi: f64, g: f64) -> Amplitude {
    let rung = match j {
        Spin::Down => n as f64,
        Spin::Up => (n + 1) as f64,
    };
    let (coef, trig) = match (j, k) {
        (Spin::Down, Spin::Down) | (Spin::Up, Spin::Up) => (Complex64::new(1.0, 0.0), Trig::Cos),
        (Spin::Down, Spin::Up) => (Complex64::from_polar(1.0, phi), Trig::Sin),
        (Spin::Up, Spin::Down) => (-Complex64::from_polar(1.0, -phi), Trig::Sin),
    };
    Amplitude {
        coef,
        freq: g * rung.sqrt(),
        trig,
    }
}

/// ⟨Ĉ_{jk} Ĉ†_{j2k2}⟩ for a carrier pulse of duration `t` (seconds).
///
/// Uses the same phase convention as [`crate::dynamics::carrier_evolve`];
/// closed forms written with the opposite phase sign correspond to
/// `phi → −phi`.
pub fn carrier_noise_element(j: Spin, k: Spin, j2: Spin, k2: Spin, t: f64, phi: f64, p: &NoiseParams) -> Complex64 {
    averaged(
        &carrier_amplitude(j, k, phi, p.omega),
        &carrier_amplitude(j2, k2, phi, p.omega),
        t,
        p.gamma,
    )
}

/// ⟨Ĵ_{n,jk} Ĵ†_{m,j2k2}⟩ for a JC pulse of duration `t` (seconds).
///
/// `n`, `m` are the source Fock indices of the two operators; negative
/// indices are rejected.
#[allow(clippy::too_many_arguments)]
pub fn jc_noise_element(
    n: i64,
    m: i64,
    j: Spin,
    k: Spin,
    j2: Spin,
    k2: Spin,
    t: f64,
    phi: f64,
    p: &NoiseParams,
) -> Result<Complex64> {
    for idx in [n, m] {
        if idx < 0 {
            return Err(SculptError::Index { index: idx });
        }
    }
    Ok(averaged(
        &jc_amplitude(n as usize, j, k, phi, p.g),
        &jc_amplitude(m as usize, j2, k2, phi, p.g),
        t,
        p.gamma,
    ))
}

/// The A, B, C, D functions of a JC pulse with area `gt` and damping `Γg²t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbcdTable {
    pub g_t: f64,
    pub damping: f64,
}

impl AbcdTable {
    pub fn new(t: f64, p: &NoiseParams) -> Self {
        Self {
            g_t: p.g * t,
            damping: p.gamma * p.g * p.g * t,
        }
    }

    fn parts(&self, n: usize, m: usize, plus: bool) -> (f64, f64) {
        let (sn, sm) = ((n as f64).sqrt(), (m as f64).sqrt());
        let x = if plus { sn + sm } else { sn - sm };
        ((self.g_t * x).cos(), (-self.damping * x * x / 2.0).exp())
    }

    pub fn a(&self, n: usize, m: usize) -> f64 {
        let (c, e) = self.parts(n, m, false);
        c * e
    }

    pub fn b(&self, n: usize, m: usize) -> f64 {
        let (c, e) = self.parts(n, m, true);
        c * e
    }

    pub fn c(&self, n: usize, m: usize) -> f64 {
        let x = (n as f64).sqrt() - (m as f64).sqrt();
        (self.g_t * x).sin() * (-self.damping * x * x / 2.0).exp()
    }

    pub fn d(&self, n: usize, m: usize) -> f64 {
        let x = (n as f64).sqrt() + (m as f64).sqrt();
        (self.g_t * x).sin() * (-self.damping * x * x / 2.0).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Spin::{Down as D, Up as U};

    fn params() -> NoiseParams {
        NoiseParams::standard()
    }

    #[test]
    fn carrier_at_zero_time() {
        let p = params();
        assert!((carrier_noise_element(D, D, D, D, 0.0, 0.4, &p) - 1.0).norm() < 1e-15);
        assert!(carrier_noise_element(D, U, D, U, 0.0, 0.4, &p).norm() < 1e-15);
    }

    #[test]
    fn carrier_noiseless_limit() {
        let p = NoiseParams { gamma: 0.0, ..params() };
        let t = 0.37 / p.omega;
        let v = carrier_noise_element(D, D, D, D, t, 1.0, &p);
        assert!((v.re - 0.37f64.cos().powi(2)).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn carrier_quarter_period() {
        let p = params();
        let t = std::f64::consts::FRAC_PI_2 / p.omega;
        let v = carrier_noise_element(D, D, D, D, t, 0.3, &p);
        let expected = 0.5 * (1.0 - (-2.0 * p.gamma * p.omega * p.omega * t).exp());
        assert!((v.re - expected).abs() < 1e-14);
    }

    #[test]
    fn carrier_matches_closed_form_with_reversed_phase() {
        // Closed forms written with phase -phi relative to carrier_evolve.
        let p = params();
        let t = 0.81 / p.omega;
        let phi = 0.67;
        let k = (-2.0 * p.gamma * p.omega * p.omega * t).exp();
        let (s2, c2) = (2.0 * p.omega * t).sin_cos();
        let i = Complex64::i();
        let e = |x: f64| Complex64::from_polar(1.0, x);
        let tp = -phi;
        let table = [
            ((D, D, D, D), Complex64::new(0.5 * (1.0 + c2 * k), 0.0)),
            ((U, U, U, U), Complex64::new(0.5 * (1.0 + c2 * k), 0.0)),
            ((U, D, U, D), Complex64::new(0.5 * (1.0 - c2 * k), 0.0)),
            ((D, U, D, U), Complex64::new(0.5 * (1.0 - c2 * k), 0.0)),
            ((D, D, D, U), i * e(-tp) / 2.0 * s2 * k),
            ((U, U, U, D), i * e(tp) / 2.0 * s2 * k),
            ((D, D, U, D), i * e(tp) / 2.0 * s2 * k),
            ((U, D, D, U), e(-2.0 * tp) / 2.0 * (1.0 - c2 * k)),
            ((D, D, U, U), Complex64::new(0.5 * (1.0 + c2 * k), 0.0)),
            ((D, U, U, U), -i * e(tp) / 2.0 * s2 * k),
        ];
        for ((a, b, c, d), want) in table {
            let got = carrier_noise_element(a, b, c, d, t, phi, &p);
            assert!((got - want).norm() < 1e-14, "{a:?}{b:?},{c:?}{d:?}: {got} vs {want}");
        }
    }

    #[test]
    fn carrier_is_n_independent_and_hermitian_paired() {
        let p = params();
        let t = 1.3 / p.omega;
        for a in Spin::BOTH {
            for b in Spin::BOTH {
                for c in Spin::BOTH {
                    for d in Spin::BOTH {
                        let x = carrier_noise_element(a, b, c, d, t, 2.0, &p);
                        let y = carrier_noise_element(c, d, a, b, t, 2.0, &p);
                        assert!((x - y.conj()).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn jc_dark_state_and_limits() {
        let p = params();
        for &t in &[0.0, 1e-6, 5e-5] {
            let v = jc_noise_element(0, 0, D, D, D, D, t, 0.5, &p).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
        let q = NoiseParams { gamma: 0.0, ..p };
        let t = 0.9 / q.g;
        let v = jc_noise_element(1, 1, D, D, D, D, t, 0.5, &q).unwrap();
        assert!((v.re - 0.9f64.cos().powi(2)).abs() < 1e-14);
        assert!(matches!(
            jc_noise_element(-1, 0, U, D, U, D, t, 0.0, &p),
            Err(SculptError::Index { index: -1 })
        ));
    }

    #[test]
    fn jc_matches_abcd_table() {
        let p = NoiseParams {
            gamma: 3e-8,
            ..params()
        };
        let t = 1.7 / p.g;
        let phi = 0.9;
        let f = AbcdTable::new(t, &p);
        let e = |x: f64| Complex64::from_polar(1.0, x);
        for n in 1..6usize {
            for m in 1..6usize {
                let (ni, mi) = (n as i64, m as i64);
                let el = |a, b, c, d, x, y| jc_noise_element(x, y, a, b, c, d, t, phi, &p).unwrap();
                let checks = [
                    (
                        el(D, D, D, D, ni, mi),
                        Complex64::new(0.5 * (f.a(n, m) + f.b(n, m)), 0.0),
                    ),
                    (
                        el(U, U, U, U, ni - 1, mi - 1),
                        Complex64::new(0.5 * (f.a(n, m) + f.b(n, m)), 0.0),
                    ),
                    (el(D, D, U, D, ni, mi - 1), e(phi) / 2.0 * (f.c(n, m) - f.d(n, m))),
                    (
                        el(U, D, U, D, ni - 1, mi - 1),
                        Complex64::new(0.5 * (f.a(n, m) - f.b(n, m)), 0.0),
                    ),
                    (
                        el(D, U, D, U, ni, mi),
                        Complex64::new(0.5 * (f.a(n, m) - f.b(n, m)), 0.0),
                    ),
                    (
                        el(D, D, D, U, ni, mi + 1),
                        e(-phi) / 2.0 * (-f.c(n, m + 1) + f.d(n, m + 1)),
                    ),
                    (
                        el(D, D, U, U, ni, mi),
                        Complex64::new(0.5 * (f.a(n, m + 1) + f.b(n, m + 1)), 0.0),
                    ),
                    (
                        el(U, D, D, U, ni - 1, mi + 1),
                        e(-2.0 * phi) / 2.0 * (-f.a(n, m + 1) + f.b(n, m + 1)),
                    ),
                    (
                        el(U, D, U, U, ni - 1, mi),
                        -e(-phi) / 2.0 * (f.c(n, m + 1) + f.d(n, m + 1)),
                    ),
                    // Sign fixed by jc_elements_match_oracle.
                    (
                        el(D, U, U, U, ni + 1, mi),
                        e(phi) / 2.0 * (f.c(n + 1, m + 1) + f.d(n + 1, m + 1)),
                    ),
                ];
                for (k, (got, want)) in checks.iter().enumerate() {
                    assert!((got - want).norm() < 1e-14, "n={n} m={m} entry {k}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn abcd_diagonal_and_bounds() {
        let p = params();
        let f = AbcdTable::new(2e-6, &p);
        for n in 0..8 {
            assert_eq!(f.a(n, n), 1.0);
            assert_eq!(f.c(n, n), 0.0);
            for m in 0..8 {
                for v in [f.a(n, m), f.b(n, m), f.c(n, m), f.d(n, m)] {
                    assert!(v.abs() <= 1.0);
                }
            }
        }
    }
}
