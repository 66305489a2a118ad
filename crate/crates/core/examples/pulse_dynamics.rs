//! Carrier and Jaynes-Cummings pulses on the joint spin-motion state, and
//! one ideal sculpture cycle.

#![allow(clippy::approx_constant)] // 3.14 is a measured phase, not π

use ion_sculpt::dynamics::{carrier_evolve, jc_evolve, sculpt_cycle_ideal, CycleParams};
use ion_sculpt::fock::{coherent_amplitudes, JointState, Spin};
use ion_sculpt::Complex64;

fn main() -> ion_sculpt::Result<()> {
    let lam = coherent_amplitudes(Complex64::new(0.5, 0.0), 12)?;
    let start = JointState::product(&lam, Spin::Up);

    let a = carrier_evolve(&start, 0.4, 1.1);
    let b = jc_evolve(&a, 3.79, 3.14)?;
    let c = carrier_evolve(&b, 1.2, -0.7);
    println!("norm after C, JC, C: {:.15}", c.norm_sqr());
    println!("weight left in |up>: {:.6}", c.project_up().norm_sqr());

    // A JC pulse only exchanges |n, up> with |n + 1, down>.
    let s = JointState::basis(3, Spin::Up, 12)?;
    let t = jc_evolve(&s, 0.7, 0.0)?;
    let moved: Vec<(usize, f64)> = t
        .down
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > 1e-14)
        .map(|(n, z)| (n, z.norm_sqr()))
        .collect();
    println!("|3, up> under JC leaks only to |n, down> with (n, weight) = {moved:?}");

    let cycle = CycleParams {
        beta: Complex64::new(-0.3994, -6.408e-5),
        epsilon: Complex64::new(25.6159, -0.0379),
        g_tau: 3.79,
        phi: 3.14,
    };
    let (out, p) = sculpt_cycle_ideal(&lam, &cycle)?;
    println!("one ideal cycle: success probability {p:.4}");
    for n in 0..5 {
        println!("  |c_{n}|^2 = {:.5}", out.get(n).norm_sqr());
    }
    Ok(())
}
