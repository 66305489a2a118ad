//! Rate-maximizing choice of the initial mean phonon number for one cycle.

use ion_sculpt::fock::MotionalAmplitudes;
use ion_sculpt::noise::NoiseParams;
use ion_sculpt::optimizer::{best_row, scan_initial_excitation, ScanMode};

fn main() -> ion_sculpt::Result<()> {
    let target = MotionalAmplitudes::from_real(&[1.0, 1.0, 1.0])?.normalized()?;
    let nbars = [0.04, 0.09, 0.16, 0.25, 0.36, 0.49, 0.64];
    for (label, mode) in [
        ("ideal", ScanMode::Ideal),
        ("noisy", ScanMode::Noisy(NoiseParams::standard())),
    ] {
        println!("{label}:\n  nbar   g_tau  phi    P      F      R");
        let rows = scan_initial_excitation(&target, &nbars, mode, 4.0, 0.5)?;
        for r in &rows {
            println!(
                "  {:.2}   {:.3}  {:.3}  {:.4} {:.4} {:.4}",
                r.nbar, r.g_tau, r.phi, r.probability, r.fidelity, r.rate
            );
        }
        println!("  best nbar: {}", best_row(&rows).unwrap().nbar);
    }
    Ok(())
}
