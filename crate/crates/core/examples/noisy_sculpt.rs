//! One sculpture cycle under laser-intensity noise: the closed-form density
//! matrix against the master-equation oracle, and the ideal roots mapped to
//! noisy pulses.

#![allow(clippy::approx_constant)] // 3.14 is a measured phase, not π

use ion_sculpt::dynamics::CycleParams;
use ion_sculpt::fock::{coherent_amplitudes, fidelity_mixed, trace_distance, MotionalAmplitudes};
use ion_sculpt::noise::{oracle_noisy_cycle, sculpt_noisy_single_cycle, NoiseParams, PulseAngles};
use ion_sculpt::solver::{best_single_cycle, working_target};
use ion_sculpt::Complex64;

fn main() -> ion_sculpt::Result<()> {
    let alpha = Complex64::new(0.5, 0.0);
    let target = MotionalAmplitudes::from_real(&[1.0, 1.0, 1.0])?.normalized()?;
    let work = working_target(&target, alpha, 1)?;
    let n_max = work.n_max();

    let (g_tau, phi) = (3.79, 3.14);
    let root = best_single_cycle(alpha, &work, g_tau, phi, 4.0, 0.5)?;
    let angles = PulseAngles::from_cycle(&CycleParams {
        beta: root.beta,
        epsilon: root.epsilon,
        g_tau,
        phi,
    });
    println!("pulses: {angles:?}");

    for gamma in [0.0, 1e-8, 5e-8] {
        let p = NoiseParams::standard().with_gamma(gamma);
        let (rho, prob) = sculpt_noisy_single_cycle(alpha, &angles, &p, n_max)?;
        let start = coherent_amplitudes(alpha, n_max)?.projector();
        let oracle = oracle_noisy_cycle(&start, &angles, &p, n_max)?;
        println!(
            "Gamma = {gamma:.0e}: F = {:.4}, P = {:.4}, purity = {:.4}, trace distance to oracle = {:.1e}",
            fidelity_mixed(&work, &rho)?,
            prob,
            rho.purity(),
            trace_distance(&rho, &oracle.rho)?
        );
    }
    Ok(())
}
