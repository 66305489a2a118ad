//! Path expansion of one noisy cycle.
//!
//! After carrier → JC → carrier and the projection on |↑⟩, output level `n`
//! is reached from four input paths: from `n−1` via ↑,↑→↓,↓→↑; from `n+1`
//! via ↑→↓,↓→↑,↑; from `n` via ↑→↓,↓,↓→↑; and from `n` via ↑,↑,↑. Because the
//! three pulses fluctuate independently, each output element is a sum over
//! path pairs of input elements times one averaged product per pulse.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::elements::{carrier_noise_element, DampedPair, Trig};
use super::{NoiseParams, PulseAngles};
use crate::error::{Result, SculptError};
use crate::fock::{DensityMatrix, MotionalAmplitudes, Spin, TRUNCATION_TOL};

const UP: usize = 0;
const DOWN: usize = 1;

fn spin(i: usize) -> Spin {
    if i == UP {
        Spin::Up
    } else {
        Spin::Down
    }
}

#[derive(Clone, Copy)]
struct Path {
    src: Option<usize>,
    after_c1: usize,
    jc_coef: Complex64,
    jc_trig: Trig,
    rung: usize,
    before_c3: usize,
}

pub(crate) struct PathKernel<'a> {
    rho_in: &'a DMatrix<Complex64>,
    e1: [[Complex64; 2]; 2],
    e3: [[Complex64; 2]; 2],
    jc_phase: Complex64,
    rungs: Vec<DampedPair>,
    max_rung: usize,
}

impl<'a> PathKernel<'a> {
    /// Kernel able to produce output rows `0..=n_out + 1`.
    pub fn new(rho_in: &'a DMatrix<Complex64>, a: &PulseAngles, p: &NoiseParams, n_out: usize) -> Self {
        let (t1, t2, t3) = a.durations(p);
        let mut e1 = [[Complex64::new(0.0, 0.0); 2]; 2];
        let mut e3 = e1;
        for x in [UP, DOWN] {
            for y in [UP, DOWN] {
                e1[x][y] = carrier_noise_element(Spin::Up, spin(x), Spin::Up, spin(y), t1, a.phi1, p);
                e3[x][y] = carrier_noise_element(spin(x), Spin::Up, spin(y), Spin::Up, t3, a.phi3, p);
            }
        }
        let max_rung = n_out + 2;
        let freqs: Vec<f64> = (0..=max_rung).map(|k| p.g * (k as f64).sqrt()).collect();
        let mut rungs = Vec::with_capacity(freqs.len() * freqs.len());
        for &a_freq in &freqs {
            for &b_freq in &freqs {
                rungs.push(DampedPair::new(a_freq, b_freq, t2, p.gamma));
            }
        }
        Self {
            rho_in,
            e1,
            e3,
            jc_phase: Complex64::from_polar(1.0, a.phi2),
            rungs,
            max_rung,
        }
    }

    fn paths(&self, n: usize) -> [Path; 4] {
        let one = Complex64::new(1.0, 0.0);
        [
            Path {
                src: n.checked_sub(1),
                after_c1: UP,
                jc_coef: -self.jc_phase.conj(),
                jc_trig: Trig::Sin,
                rung: n,
                before_c3: DOWN,
            },
            Path {
                src: Some(n + 1),
                after_c1: DOWN,
                jc_coef: self.jc_phase,
                jc_trig: Trig::Sin,
                rung: n + 1,
                before_c3: UP,
            },
            Path {
                src: Some(n),
                after_c1: DOWN,
                jc_coef: one,
                jc_trig: Trig::Cos,
                rung: n,
                before_c3: DOWN,
            },
            Path {
                src: Some(n),
                after_c1: UP,
                jc_coef: one,
                jc_trig: Trig::Cos,
                rung: n + 1,
                before_c3: UP,
            },
        ]
    }

    fn input(&self, a: Option<usize>, b: Option<usize>) -> Complex64 {
        match (a, b) {
            (Some(a), Some(b)) if a < self.rho_in.nrows() && b < self.rho_in.ncols() => self.rho_in[(a, b)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Unnormalized output element ρ_{n,m}; requires `n, m <= n_out + 1`.
    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        debug_assert!(n < self.max_rung && m < self.max_rung);
        let width = self.max_rung + 1;
        let mut acc = Complex64::new(0.0, 0.0);
        let pm = self.paths(m);
        for x in self.paths(n) {
            for y in &pm {
                let r = self.input(x.src, y.src);
                if r == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let jc =
                    x.jc_coef * y.jc_coef.conj() * self.rungs[x.rung * width + y.rung].product(x.jc_trig, y.jc_trig);
                acc += r * self.e1[x.after_c1][y.after_c1] * jc * self.e3[x.before_c3][y.before_c3];
            }
        }
        acc
    }

    /// Full output block `0..=n` and the weight that lands on level `n + 1`.
    pub fn matrix(&self, n: usize) -> (DMatrix<Complex64>, f64) {
        let mut out = DMatrix::from_element(n + 1, n + 1, Complex64::new(0.0, 0.0));
        for i in 0..=n {
            for j in i..=n {
                let v = self.entry(i, j);
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        (out, self.overflow(n))
    }

    /// Weight that lands on output level `n + 1`.
    pub fn overflow(&self, n: usize) -> f64 {
        self.entry(n + 1, n + 1).re
    }
}

pub(crate) fn check_overflow(total: f64, lost: f64, n_max: usize) -> Result<()> {
    if !(total > 1e-14) {
        return Err(SculptError::DegenerateProjection { norm: total });
    }
    if lost / total > TRUNCATION_TOL {
        return Err(SculptError::Truncation {
            n_max,
            lost: lost / total,
        });
    }
    Ok(())
}

/// Fidelity with `target` and success probability of one noisy cycle,
/// computing only the output elements these need.
pub fn noisy_summary(
    rho_in: &DensityMatrix,
    angles: &PulseAngles,
    p: &NoiseParams,
    target: &MotionalAmplitudes,
) -> Result<(f64, f64)> {
    angles.validate()?;
    p.validate()?;
    let n_max = target.n_max();
    let k = PathKernel::new(rho_in.matrix(), angles, p, n_max);
    let probability: f64 = (0..=n_max).map(|n| k.entry(n, n).re).sum();
    check_overflow(probability, k.overflow(n_max), n_max)?;
    let top = target.significant_max();
    let d = target.amps();
    let mut f = Complex64::new(0.0, 0.0);
    for i in 0..=top {
        if d[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..=top {
            if d[j] != Complex64::new(0.0, 0.0) {
                f += d[i].conj() * k.entry(i, j) * d[j];
            }
        }
    }
    Ok((f.re / probability, probability))
}
