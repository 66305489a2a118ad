//! Multi-cycle root solving for a target with four Fock components.

use ion_sculpt::fock::MotionalAmplitudes;
use ion_sculpt::solver::{min_cycles, solve_multi_cycle};
use ion_sculpt::Complex64;

fn main() -> ion_sculpt::Result<()> {
    let target = MotionalAmplitudes::from_real(&[1.0, 0.0, 1.0, 1.0])?.normalized()?;
    let m = min_cycles(&target);
    let alpha = Complex64::new(0.6, 0.0);
    println!("N_d = {}, cycles needed: {m}", target.significant_max());

    let sol = solve_multi_cycle(alpha, &target, &vec![3.0; m], &vec![0.0; m], 32, 7)?;
    println!("residual {:.2e} (exact: {})", sol.residual, sol.exact);
    for (k, c) in sol.plan.cycles.iter().enumerate() {
        println!(
            "cycle {k}: beta = {:+.4}{:+.4}i, eps = {:+.4}{:+.4}i, g tau = {}, phi = {}",
            c.beta.re, c.beta.im, c.epsilon.re, c.epsilon.im, c.g_tau, c.phi
        );
    }
    println!(
        "F = {:.6}, P = {:.4}, R = {:.4}",
        sol.fidelity, sol.probability, sol.rate
    );
    Ok(())
}
