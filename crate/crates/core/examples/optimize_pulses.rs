//! Grid-plus-simplex optimization of the noisy pulse sequence for the
//! truncated phase state.

use ion_sculpt::fock::MotionalAmplitudes;
use ion_sculpt::noise::NoiseParams;
use ion_sculpt::optimizer::{optimize_noisy, Interval, SearchSpace};

fn main() -> ion_sculpt::Result<()> {
    let target = MotionalAmplitudes::from_real(&[1.0, 1.0, 1.0])?.normalized()?;
    let p = NoiseParams::standard();

    let fixed = SearchSpace::default();
    let r = optimize_noisy(&target, &fixed, &p, 5000, 1)?;
    println!(
        "n = 0.25 fixed: F = {:.4}, P = {:.4}, R = {:.4} after {} evaluations",
        r.fidelity, r.probability, r.rate, r.evaluations
    );
    println!("  pulses {:?}", r.params.cycles[0]);
    println!(
        "  {} improvements recorded, budget exhausted: {}",
        r.trace.len(),
        r.budget_exhausted
    );

    let free = SearchSpace {
        nbar: Interval::new(0.04, 0.64),
        ..SearchSpace::default()
    };
    let r = optimize_noisy(&target, &free, &p, 20_000, 1)?;
    println!(
        "n free in [0.04, 0.64]: n = {:.3}, F = {:.4}, P = {:.4}, R = {:.4}",
        r.params.nbar, r.fidelity, r.probability, r.rate
    );
    Ok(())
}
