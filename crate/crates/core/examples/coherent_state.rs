//! Truncated coherent states, Fock-space fidelities and density-matrix checks.

use ion_sculpt::fock::{
    coherent_amplitudes, default_n_max, fidelity_mixed, fidelity_pure, DensityMatrix, MotionalAmplitudes,
};
use ion_sculpt::Complex64;

fn main() -> ion_sculpt::Result<()> {
    let alpha = Complex64::new(0.5, 0.0);
    let n_max = default_n_max(2, 1, alpha.norm_sqr());
    let lam = coherent_amplitudes(alpha, n_max)?;
    println!("|alpha = 0.5> truncated at n_max = {n_max}");
    for (n, c) in lam.amps().iter().take(5).enumerate() {
        println!("  c_{n} = {:+.6} {:+.6}i", c.re, c.im);
    }

    let vacuum = MotionalAmplitudes::vacuum(n_max);
    println!(
        "|<0|alpha>|^2 = {:.6} (exp(-|alpha|^2) = {:.6})",
        fidelity_pure(&vacuum, &lam)?,
        (-0.25f64).exp()
    );

    let target = MotionalAmplitudes::from_real(&[1.0, 1.0, 1.0])?
        .normalized()?
        .resized(n_max)?;
    println!(
        "phase-state overlap of the coherent input: {:.6}",
        fidelity_pure(&target, &lam)?
    );

    let thermal: Vec<f64> = (0..=n_max).map(|n| 0.5f64.powi(n as i32)).collect();
    let rho = DensityMatrix::diagonal(&thermal)?
        .normalized()?
        .mix(&lam.projector(), 0.5)?;
    let report = rho.check_physical();
    println!(
        "mixed state: trace {:.12}, purity {:.6}, min eigenvalue {:.3e}, physical {}",
        rho.trace(),
        rho.purity(),
        report.min_eigenvalue,
        report.is_physical()
    );
    println!("<target|rho|target> = {:.6}", fidelity_mixed(&target, &rho)?);

    match coherent_amplitudes(Complex64::new(3.0, 0.0), 8) {
        Err(e) => println!("alpha = 3 at n_max = 8 is rejected: {e}"),
        Ok(_) => unreachable!("the tail is far above tolerance"),
    }
    Ok(())
}
