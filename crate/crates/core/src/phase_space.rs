//! Wigner functions of motional states and iso-fidelity two-level families.
//!
//! Quadratures are `q = −Re β`, `p = −Im β`, with the normalization
//! `∫ W dq dp = 1`. A coherent state |α⟩ (α real) then has
//! `W = (2/π) exp[−2(q + α)² − 2p²]`, peaking at `2/π` at `(−α, 0)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SculptError};
use crate::fock::{DensityMatrix, MotionalAmplitudes};

/// Allowed deviation of the integrated grid from 1 before failing.
pub const GRID_NORM_TOL: f64 = 1e-2;

/// Uniform grid specification for both quadratures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerAxes {
    pub q_min: f64,
    pub q_max: f64,
    pub q_points: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
}

impl Default for WignerAxes {
    /// q, p ∈ [−4, 4] with 161 points each.
    fn default() -> Self {
        Self::square(4.0, 161)
    }
}

impl WignerAxes {
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            q_min: -half_width,
            q_max: half_width,
            q_points: points,
            p_min: -half_width,
            p_max: half_width,
            p_points: points,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.q_points >= 2
            && self.p_points >= 2
            && self.q_max > self.q_min
            && self.p_max > self.p_min
            && [self.q_min, self.q_max, self.p_min, self.p_max]
                .iter()
                .all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(SculptError::InvalidParameter(format!("bad Wigner axes {self:?}")))
        }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Wigner function sampled on a grid; `values[i][j] = W(q_axis[i], p_axis[j])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub q_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    pub fn dq(&self) -> f64 {
        self.q_axis[1] - self.q_axis[0]
    }

    pub fn dp(&self) -> f64 {
        self.p_axis[1] - self.p_axis[0]
    }

    /// Riemann sum Σ W Δq Δp.
    pub fn integral(&self) -> f64 {
        self.values.iter().flatten().sum::<f64>() * self.dq() * self.dp()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest pointwise difference to a grid on the same axes.
    pub fn sup_distance(&self, other: &WignerGrid) -> Result<f64> {
        if self.q_axis != other.q_axis || self.p_axis != other.p_axis {
            return Err(SculptError::DimensionMismatch {
                left: self.q_axis.len() * self.p_axis.len(),
                right: other.q_axis.len() * other.p_axis.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Σ_p W(q, p) Δp for every q on the axis.
    pub fn position_marginal(&self) -> Vec<f64> {
        let dp = self.dp();
        self.values.iter().map(|row| row.iter().sum::<f64>() * dp).collect()
    }

    /// CSV with header `q,p,w`, one row per grid point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "q,p,w")?;
        for (i, q) in self.q_axis.iter().enumerate() {
            for (j, p) in self.p_axis.iter().enumerate() {
                writeln!(out, "{q:.16e},{p:.16e},{:.16e}", self.values[i][j])?;
            }
        }
        Ok(())
    }
}

/// Generalized Laguerre values L_n^{(k)}(x) for n = 0..=n_max.
fn laguerre(n_max: usize, k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max >= 1 {
        out.push(1.0 + k as f64 - x);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + k as f64 - x) * out[n] - (nf + k as f64) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

/// W of ρ at phase-space point β (here β = −(q + ip)).
fn wigner_at_beta(rho: &DMatrix<Complex64>, beta: Complex64) -> f64 {
    let d = rho.nrows();
    let r2 = beta.norm_sqr();
    let gauss = (2.0 / PI) * (-2.0 * r2).exp();
    let x = 4.0 * r2;
    let two_bc = 2.0 * beta.conj();
    let mut total = 0.0;
    let mut power = Complex64::new(1.0, 0.0);
    for k in 0..d {
        // |m⟩⟨n| with m = n + k
        let lag = laguerre(d - 1 - k, k, x);
        let mut ratio = 1.0; // sqrt(n!/m!) at n = 0
        for j in 1..=k {
            ratio /= (j as f64).sqrt();
        }
        for n in 0..d - k {
            let m = n + k;
            if n > 0 {
                ratio *= (n as f64 / m as f64).sqrt();
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let kernel = power * (sign * ratio * lag[n]);
            let term = rho[(m, n)] * kernel;
            total += if k == 0 { term.re } else { 2.0 * term.re };
        }
        power *= two_bc;
    }
    gauss * total
}

/// W(q, p) of a density matrix at one point.
pub fn wigner_point(rho: &DensityMatrix, q: f64, p: f64) -> f64 {
    wigner_at_beta(rho.matrix(), Complex64::new(-q, -p))
}

/// Samples W of `rho` on `axes`.
///
/// Fails with `GridTooCoarse` when the grid integral misses 1 by more than
/// [`GRID_NORM_TOL`].
pub fn wigner(rho: &DensityMatrix, axes: &WignerAxes) -> Result<WignerGrid> {
    axes.validate()?;
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(SculptError::InvalidParameter(format!(
            "density matrix trace {tr} is not 1"
        )));
    }
    let grid = wigner_unchecked(rho.matrix(), axes);
    let norm = grid.integral();
    if (norm - 1.0).abs() > GRID_NORM_TOL {
        return Err(SculptError::GridTooCoarse { norm });
    }
    Ok(grid)
}

/// W of a pure state (passed through as a rank-1 density matrix).
pub fn wigner_pure(state: &MotionalAmplitudes, axes: &WignerAxes) -> Result<WignerGrid> {
    wigner(&state.normalized()?.projector(), axes)
}

fn wigner_unchecked(rho: &DMatrix<Complex64>, axes: &WignerAxes) -> WignerGrid {
    let q_axis = WignerAxes::axis(axes.q_min, axes.q_max, axes.q_points);
    let p_axis = WignerAxes::axis(axes.p_min, axes.p_max, axes.p_points);
    let values = q_axis
        .par_iter()
        .map(|&q| {
            p_axis
                .iter()
                .map(|&p| wigner_at_beta(rho, Complex64::new(-q, -p)))
                .collect()
        })
        .collect();
    WignerGrid { q_axis, p_axis, values }
}

/// Normalized Hermite functions ψ_n(x), n = 0..=n_max.
fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PI.powf(-0.25) * (-x * x / 2.0).exp());
    if n_max >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Exact position density ⟨q|ρ|q⟩ in the grid's q coordinate.
pub fn position_density(rho: &DensityMatrix, q: f64) -> f64 {
    let x = -std::f64::consts::SQRT_2 * q;
    let psi = hermite_functions(rho.n_max(), x);
    let m = rho.matrix();
    let mut total = 0.0;
    for a in 0..psi.len() {
        for b in 0..psi.len() {
            total += (m[(a, b)] * psi[a] * psi[b]).re;
        }
    }
    std::f64::consts::SQRT_2 * total
}

/// Branch of the relative phase in the iso-fidelity family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSign {
    Positive,
    Negative,
}

impl PhaseSign {
    pub fn factor(self) -> f64 {
        match self {
            PhaseSign::Positive => 1.0,
            PhaseSign::Negative => -1.0,
        }
    }
}

/// Reference state Ξ = (|0⟩ + |1⟩)/√2.
pub fn xi_state() -> MotionalAmplitudes {
    MotionalAmplitudes::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("two levels")
}

fn iso_phase(coherence: f64, fidelity: f64) -> Result<f64> {
    let num = fidelity - 0.5;
    if coherence == 0.0 {
        return if num == 0.0 {
            Ok(0.0)
        } else {
            Err(SculptError::OutOfCone {
                arg: f64::INFINITY.copysign(num),
            })
        };
    }
    let arg = num / coherence;
    // Rounding can push boundary points of the cone just past |arg| = 1.
    if !(arg.abs() <= 1.0 + 1e-12) {
        return Err(SculptError::OutOfCone { arg });
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(SculptError::InvalidParameter(format!(
            "{name} = {v} must lie in [0, 1]"
        )))
    }
}

/// λ|0⟩ + e^{±iφ}√(1−λ²)|1⟩ with fidelity `fidelity` against Ξ.
pub fn iso_fidelity_state(lambda: f64, fidelity: f64, sign: PhaseSign) -> Result<MotionalAmplitudes> {
    check_unit("lambda", lambda)?;
    let mu = (1.0 - lambda * lambda).sqrt();
    let phi = sign.factor() * iso_phase(lambda * mu, fidelity)?;
    MotionalAmplitudes::new(vec![Complex64::new(lambda, 0.0), Complex64::from_polar(mu, phi)])
}

/// Two-level mixture with coherence scaled by `kappa` and fidelity
/// `fidelity` against Ξ.
pub fn iso_fidelity_mixture(lambda: f64, kappa: f64, fidelity: f64, sign: PhaseSign) -> Result<DensityMatrix> {
    check_unit("lambda", lambda)?;
    check_unit("kappa", kappa)?;
    let l2 = lambda * lambda;
    let c = kappa * lambda * (1.0 - l2).sqrt();
    let phi = sign.factor() * iso_phase(c, fidelity)?;
    let off = Complex64::from_polar(c, -phi);
    DensityMatrix::from_matrix(DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(l2, 0.0), off, off.conj(), Complex64::new(1.0 - l2, 0.0)],
    ))
}

/// Pauli expectations of a two-level state with |0⟩ as the +z pole.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r_x: f64,
    pub r_y: f64,
    pub r_z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.r_x * self.r_x + self.r_y * self.r_y + self.r_z * self.r_z).sqrt()
    }
}

/// Bloch vector of a two-level density matrix.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(SculptError::DimensionMismatch {
            left: rho.dim(),
            right: 2,
        });
    }
    let r01 = rho.get(0, 1);
    Ok(BlochVector {
        r_x: 2.0 * r01.re,
        r_y: -2.0 * r01.im,
        r_z: (rho.get(0, 0) - rho.get(1, 1)).re,
    })
}

/// Bloch vector of a two-level pure state.
pub fn bloch_vector_state(state: &MotionalAmplitudes) -> Result<BlochVector> {
    bloch_vector(&state.projector())
}

/// (κ, F, λ) of the first mixed-state example.
pub const MIXTURE_A_PARAMS: (f64, f64, f64) = (0.9, 0.8, 0.7);
/// (κ, F, λ) of a second mixed-state example with higher fidelity.
pub const MIXTURE_B_PARAMS: (f64, f64, f64) = (0.9, 0.85, 0.7);
