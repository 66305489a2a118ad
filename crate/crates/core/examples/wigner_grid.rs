//! Wigner functions of a coherent state, a Fock state and the sculpted
//! phase state, written as CSV.

use ion_sculpt::fock::{coherent_amplitudes, MotionalAmplitudes};
use ion_sculpt::phase_space::{wigner_point, wigner_pure, WignerAxes};
use ion_sculpt::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let axes = WignerAxes::default();
    let coherent = coherent_amplitudes(Complex64::new(0.5, 0.0), 12)?;
    let fock1 = MotionalAmplitudes::fock(1, 12)?;
    let phase = MotionalAmplitudes::from_real(&[1.0, 1.0, 1.0])?.normalized()?;

    for (name, state) in [("coherent", &coherent), ("fock1", &fock1), ("phase", &phase)] {
        let g = wigner_pure(state, &axes)?;
        let min = g.values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        println!(
            "{name:>8}: integral {:.6}, max |W| {:.4}, min W {:+.4}",
            g.integral(),
            g.max_abs(),
            min
        );
    }
    println!(
        "W_coherent(-0.5, 0) = {:.6} (2/pi = {:.6})",
        wigner_point(&coherent.projector(), -0.5, 0.0),
        2.0 / std::f64::consts::PI
    );

    let path = std::env::temp_dir().join("ion_sculpt_phase_state_wigner.csv");
    wigner_pure(&phase, &axes)?.write_csv(std::fs::File::create(&path)?)?;
    println!("phase-state grid written to {}", path.display());
    Ok(())
}
