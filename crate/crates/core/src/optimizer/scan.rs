//! Rate-maximizing scan over the initial mean phonon number for one cycle.
//!
//! For every n̄ the JC area gτ ∈ [0, 2π] and phase φ are searched on a grid
//! and refined by simplex; at each (gτ, φ) the carrier parameters come from
//! the max-rate root of the single-cycle system.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::nelder_mead;
use crate::dynamics::CycleParams;
use crate::error::{Result, SculptError};
use crate::fock::{coherent_amplitudes, coherent_unchecked, MotionalAmplitudes};
use crate::noise::{noisy_summary, NoiseParams, PulseAngles};
use crate::solver::{best_single_cycle, rate, working_target};

/// Grid resolution in gτ.
pub const SCAN_G_POINTS: usize = 128;
/// Grid resolution in φ.
pub const SCAN_PHI_POINTS: usize = 8;
/// Grid points refined by simplex.
pub const SCAN_STARTS: usize = 3;
const SCAN_REFINE_EVALS: usize = 200;

/// How a candidate cycle is scored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ScanMode {
    Ideal,
    /// The ideal root mapped to pulses and run through the noisy cycle.
    Noisy(NoiseParams),
}

/// Best cycle for one n̄.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub nbar: f64,
    pub g_tau: f64,
    pub phi: f64,
    pub beta: Complex64,
    pub epsilon: Complex64,
    pub probability: f64,
    pub fidelity: f64,
    pub rate: f64,
}

struct Scorer<'a> {
    alpha: Complex64,
    target: &'a MotionalAmplitudes,
    rho_in: Option<crate::fock::DensityMatrix>,
    mode: ScanMode,
    xi: f64,
    zeta: f64,
}

impl Scorer<'_> {
    fn row(&self, nbar: f64, g_tau: f64, phi: f64) -> Option<ScanRow> {
        let g_tau = g_tau.clamp(0.0, TAU);
        let phi = phi.rem_euclid(TAU);
        let root = best_single_cycle(self.alpha, self.target, g_tau, phi, self.xi, self.zeta).ok()?;
        let (fidelity, probability) = match (&self.mode, &self.rho_in) {
            (ScanMode::Noisy(p), Some(rho)) => {
                let angles = PulseAngles::from_cycle(&CycleParams {
                    beta: root.beta,
                    epsilon: root.epsilon,
                    g_tau,
                    phi,
                });
                noisy_summary(rho, &angles, p, self.target).ok()?
            }
            _ => (root.fidelity, root.probability),
        };
        let r = rate(fidelity, probability, self.xi, self.zeta);
        r.is_finite().then_some(ScanRow {
            nbar,
            g_tau,
            phi,
            beta: root.beta,
            epsilon: root.epsilon,
            probability,
            fidelity,
            rate: r,
        })
    }
}

/// One row per entry of `nbar_values`, each maximizing R over (gτ, φ).
pub fn scan_initial_excitation(
    target: &MotionalAmplitudes,
    nbar_values: &[f64],
    mode: ScanMode,
    xi: f64,
    zeta: f64,
) -> Result<Vec<ScanRow>> {
    if nbar_values.is_empty() || nbar_values.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(SculptError::InvalidParameter(format!("invalid n̄ list {nbar_values:?}")));
    }
    if let ScanMode::Noisy(p) = &mode {
        p.validate()?;
    }
    let target = target.normalized()?;
    nbar_values
        .iter()
        .map(|&nbar| {
            let row = scan_alpha(&target, Complex64::new(nbar.sqrt(), 0.0), mode, xi, zeta)?;
            Ok(ScanRow { nbar, ..row })
        })
        .collect()
}

/// Max-rate single cycle from the coherent state |α⟩, searched over (gτ, φ).
pub fn scan_alpha(
    target: &MotionalAmplitudes,
    alpha: Complex64,
    mode: ScanMode,
    xi: f64,
    zeta: f64,
) -> Result<ScanRow> {
    if let ScanMode::Noisy(p) = &mode {
        p.validate()?;
    }
    let nbar = alpha.norm_sqr();
    let target = working_target(target, alpha, 1)?;
    let rho_in = match mode {
        ScanMode::Noisy(_) => {
            coherent_amplitudes(alpha, target.n_max())?;
            Some(coherent_unchecked(alpha, target.n_max() + 2).projector())
        }
        ScanMode::Ideal => None,
    };
    let s = Scorer {
        alpha,
        target: &target,
        rho_in,
        mode,
        xi,
        zeta,
    };
    let dg = TAU / SCAN_G_POINTS as f64;
    let dphi = TAU / SCAN_PHI_POINTS as f64;
    let grid: Vec<ScanRow> = (0..SCAN_G_POINTS * SCAN_PHI_POINTS)
        .into_par_iter()
        .filter_map(|k| {
            let g = (k / SCAN_PHI_POINTS) as f64 * dg + 0.5 * dg;
            let phi = (k % SCAN_PHI_POINTS) as f64 * dphi;
            s.row(nbar, g, phi)
        })
        .collect();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[b].rate.total_cmp(&grid[a].rate).then(a.cmp(&b)));
    let refined: Vec<ScanRow> = order
        .iter()
        .take(SCAN_STARTS)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| {
            let start = grid[i];
            let nm = nelder_mead(
                |x| s.row(nbar, x[0], x[1]).map_or(0.0, |r| -r.rate),
                &[start.g_tau, start.phi],
                &[0.5 * dg, 0.5 * dphi],
                SCAN_REFINE_EVALS,
                1e-9,
                1e-13,
            );
            match s.row(nbar, nm.x[0], nm.x[1]) {
                Some(r) if r.rate > start.rate => r,
                _ => start,
            }
        })
        .collect();
    best_row(&refined).ok_or(SculptError::NoFiniteRoot)
}

/// Row with the highest rate (first on ties).
pub fn best_row(rows: &[ScanRow]) -> Option<ScanRow> {
    rows.iter().copied().fold(None, |best: Option<ScanRow>, r| match best {
        Some(b) if b.rate >= r.rate => Some(b),
        _ => Some(r),
    })
}
