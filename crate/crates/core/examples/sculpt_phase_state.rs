//! Solving the single-cycle system for the truncated phase state
//! (|0> + |1> + |2>)/sqrt(3) and running the resulting plan.

#![allow(clippy::approx_constant)] // 3.14 is a measured phase, not π

use ion_sculpt::dynamics::{sculpt_run_ideal, CycleParams};
use ion_sculpt::fock::MotionalAmplitudes;
use ion_sculpt::solver::{evaluate_roots, rate, select_root, solve_single_cycle, working_target};
use ion_sculpt::Complex64;

fn main() -> ion_sculpt::Result<()> {
    let target = MotionalAmplitudes::from_real(&[1.0, 1.0, 1.0])?.normalized()?;
    let alpha = Complex64::new(0.5, 0.0);
    let (g_tau, phi) = (3.79, 3.14);

    let roots = solve_single_cycle(alpha, &target, g_tau, phi)?;
    let evals = evaluate_roots(alpha, &target, g_tau, phi, &roots, 4.0, 0.5)?;
    for e in &evals {
        println!(
            "beta = {:+.5}{:+.5}i  eps = {:+.4}{:+.4}i  residual {:.1e}  F {:.4}  P {:.4}  R {:.4}",
            e.beta.re, e.beta.im, e.epsilon.re, e.epsilon.im, e.residual, e.fidelity, e.probability, e.rate
        );
    }
    let best = select_root(&evals).expect("at least one root");

    let work = working_target(&target, alpha, 1)?;
    let plan = [CycleParams {
        beta: best.beta,
        epsilon: best.epsilon,
        g_tau,
        phi,
    }];
    let run = sculpt_run_ideal(alpha, &plan, &work)?;
    println!(
        "selected root: F = {:.4}, P = {:.4}, R = {:.4}",
        run.fidelity,
        run.probability,
        rate(run.fidelity, run.probability, 4.0, 0.5)
    );
    Ok(())
}
