//! Noisy sculpture cycles: closed form, path expansion and oracle pipeline.

use serde::{Deserialize, Serialize};

use super::kernel::{check_overflow, PathKernel};
use super::master::{evolve_master, JointDensity};
use super::term_sum::{term_sum_element, term_sum_matrix};
use super::{NoiseParams, PulseAngles};
use crate::error::Result;
use crate::fock::{coherent_amplitudes, coherent_unchecked, fidelity_mixed, DensityMatrix, MotionalAmplitudes, Spin};
use num_complex::Complex64;

/// Normalized motional state after one noisy cycle and its success probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyCycle {
    pub rho: DensityMatrix,
    pub probability: f64,
}

impl NoisyCycle {
    fn from_unnormalized(rho: nalgebra::DMatrix<Complex64>) -> Result<Self> {
        let rho = DensityMatrix::from_matrix(rho)?;
        let probability = rho.trace();
        Ok(Self {
            rho: rho.normalized()?,
            probability,
        })
    }
}

/// One noisy cycle on an arbitrary motional density matrix, keeping levels
/// `0..=n_max` of the output.
pub fn noisy_cycle(rho_in: &DensityMatrix, angles: &PulseAngles, p: &NoiseParams, n_max: usize) -> Result<NoisyCycle> {
    angles.validate()?;
    p.validate()?;
    let k = PathKernel::new(rho_in.matrix(), angles, p, n_max);
    let (m, lost) = k.matrix(n_max);
    check_overflow(m.trace().re, lost, n_max)?;
    NoisyCycle::from_unnormalized(m)
}

/// One noisy cycle on the coherent state |α⟩ from the closed-form elements.
///
/// Returns the normalized density matrix over `0..=n_max` and the
/// probability of the dark (|↑⟩) outcome.
pub fn sculpt_noisy_single_cycle(
    alpha: Complex64,
    angles: &PulseAngles,
    p: &NoiseParams,
    n_max: usize,
) -> Result<(DensityMatrix, f64)> {
    angles.validate()?;
    p.validate()?;
    coherent_amplitudes(alpha, n_max)?;
    let lam = coherent_unchecked(alpha, n_max + 2);
    let m = term_sum_matrix(lam.amps(), angles, p, n_max);
    let lost = term_sum_element(lam.amps(), n_max + 1, n_max + 1, angles, p).re;
    check_overflow(m.trace().re, lost, n_max)?;
    let out = NoisyCycle::from_unnormalized(m)?;
    Ok((out.rho, out.probability))
}

/// The same cycle by sequential master-equation evolution of the full
/// spin ⊗ Fock state, projection on |↑⟩ and trace over the spin.
pub fn oracle_noisy_cycle(
    rho_in: &DensityMatrix,
    angles: &PulseAngles,
    p: &NoiseParams,
    n_max: usize,
) -> Result<NoisyCycle> {
    angles.validate()?;
    p.validate()?;
    let work = rho_in.n_max().max(n_max) + 3;
    let mut state = JointDensity::from_motional(&rho_in.resized(work), Spin::Up);
    for pulse in angles.pulses(p) {
        state = evolve_master(&state, &pulse)?;
    }
    let lost = state.uu[(n_max + 1, n_max + 1)].re;
    let m = state.uu.view((0, 0), (n_max + 1, n_max + 1)).into_owned();
    check_overflow(m.trace().re, lost, n_max)?;
    NoisyCycle::from_unnormalized(m)
}

/// Result of a chain of noisy cycles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyRun {
    pub rho: DensityMatrix,
    pub fidelity: f64,
    pub probability: f64,
    pub cycle_probabilities: Vec<f64>,
}

/// Runs `cycles` on |α⟩ at truncation `target.n_max()` and scores the result.
pub fn noisy_run(
    alpha: Complex64,
    cycles: &[PulseAngles],
    p: &NoiseParams,
    target: &MotionalAmplitudes,
) -> Result<NoisyRun> {
    let n_max = target.n_max();
    let mut rho = coherent_amplitudes(alpha, n_max)?.projector();
    let mut probs = Vec::with_capacity(cycles.len());
    for a in cycles {
        let out = noisy_cycle(&rho, a, p, n_max)?;
        probs.push(out.probability);
        rho = out.rho;
    }
    Ok(NoisyRun {
        fidelity: fidelity_mixed(target, &rho)?,
        probability: probs.iter().product(),
        cycle_probabilities: probs,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{sculpt_cycle_ideal, CycleParams};
    use crate::error::SculptError;
    use crate::fock::trace_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_angles(rng: &mut ChaCha8Rng) -> PulseAngles {
        let tau = std::f64::consts::TAU;
        PulseAngles::from_array([
            rng.gen_range(0.0..1.5),
            rng.gen_range(0.0..tau),
            rng.gen_range(0.0..4.0),
            rng.gen_range(0.0..tau),
            rng.gen_range(0.0..1.5),
            rng.gen_range(0.0..tau),
        ])
    }

    #[test]
    fn term_sum_matches_path_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = NoiseParams::standard().with_gamma(2e-8);
        for _ in 0..10 {
            let a = random_angles(&mut rng);
            let alpha = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let lam = coherent_unchecked(alpha, 16);
            let rho_in = lam.projector();
            let lit = term_sum_matrix(lam.amps(), &a, &p, 14);
            let (path, _) = PathKernel::new(rho_in.matrix(), &a, &p, 14).matrix(14);
            assert!((&lit - &path).norm() < 1e-12, "{a:?}");
        }
    }

    #[test]
    fn path_expansion_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = NoiseParams::standard().with_gamma(3e-8);
        for _ in 0..5 {
            let a = random_angles(&mut rng);
            let pops: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
            let mixed = DensityMatrix::diagonal(&pops).unwrap().normalized().unwrap();
            let pure = coherent_unchecked(Complex64::new(0.6, -0.3), 7)
                .projector()
                .normalized()
                .unwrap();
            let rho_in = mixed.mix(&pure, 0.4).unwrap();
            let fast = noisy_cycle(&rho_in, &a, &p, 9).unwrap();
            let slow = oracle_noisy_cycle(&rho_in, &a, &p, 9).unwrap();
            let td = trace_distance(&fast.rho, &slow.rho).unwrap();
            assert!(td < 1e-10, "{td:e} {} {}", fast.probability, slow.probability);
            assert!((fast.probability - slow.probability).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_oracle_at_reference_point() {
        let p = NoiseParams::standard();
        let a = PulseAngles::from_array([0.56, -5.48, 0.75, 1.40, 1.88, -1.43]);
        let alpha = Complex64::new(0.5, 0.0);
        let (rho, prob) = sculpt_noisy_single_cycle(alpha, &a, &p, 12).unwrap();
        let start = coherent_amplitudes(alpha, 12).unwrap().projector();
        let oracle = oracle_noisy_cycle(&start, &a, &p, 12).unwrap();
        assert!(trace_distance(&rho, &oracle.rho).unwrap() < 1e-9);
        assert!((prob - oracle.probability).abs() < 1e-12);
        let r = rho.check_physical();
        assert!(r.hermiticity_error < 1e-10 && r.trace_error < 1e-10 && r.min_eigenvalue > -1e-9);
    }

    #[test]
    fn noiseless_reduces_to_ideal_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = NoiseParams::noiseless();
        let alpha = Complex64::new(0.5, 0.2);
        let lam = coherent_amplitudes(alpha, 14).unwrap();
        for _ in 0..20 {
            let a = random_angles(&mut rng);
            let cyc: CycleParams = a.to_cycle();
            let (ideal, p_ideal) = sculpt_cycle_ideal(&lam, &cyc).unwrap();
            let (rho, prob) = sculpt_noisy_single_cycle(alpha, &a, &p, 14).unwrap();
            assert!((fidelity_mixed(&ideal, &rho).unwrap() - 1.0).abs() < 1e-9);
            assert!((prob - p_ideal).abs() < 1e-9);
        }
    }

    #[test]
    fn truncation_is_reported() {
        let a = PulseAngles::from_array([0.3, 0.0, 1.0, 0.0, 0.3, 0.0]);
        let p = NoiseParams::standard();
        let err = sculpt_noisy_single_cycle(Complex64::new(2.0, 0.0), &a, &p, 6).unwrap_err();
        assert!(matches!(err, SculptError::Truncation { .. }));
    }
}
