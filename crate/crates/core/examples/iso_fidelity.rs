//! Two-level states with equal fidelity against (|0> + |1>)/sqrt(2): their
//! Bloch cone, and Wigner functions that differ despite equal fidelity.

use ion_sculpt::fock::fidelity_pure;
use ion_sculpt::phase_space::{
    bloch_vector, bloch_vector_state, iso_fidelity_mixture, iso_fidelity_state, wigner_pure, xi_state, PhaseSign,
    WignerAxes, MIXTURE_A_PARAMS,
};

fn main() -> ion_sculpt::Result<()> {
    let f = (2.0 + 3f64.sqrt()) / 4.0;
    let xi = xi_state();
    let half = iso_fidelity_state(0.5, f, PhaseSign::Positive)?;
    let root3 = iso_fidelity_state(3f64.sqrt() / 2.0, f, PhaseSign::Positive)?;
    println!("F(lambda = 1/2) = {:.15}", fidelity_pure(&xi, &half)?);
    println!("F(lambda = sqrt3/2) = {:.15}", fidelity_pure(&xi, &root3)?);

    for lambda in [0.55, 0.6, 0.65, std::f64::consts::FRAC_1_SQRT_2, 0.75, 0.8] {
        for sign in [PhaseSign::Positive, PhaseSign::Negative] {
            let b = bloch_vector_state(&iso_fidelity_state(lambda, f, sign)?)?;
            println!(
                "lambda {lambda:.4} {sign:?}: r = ({:.6}, {:+.6}, {:+.6})",
                b.r_x, b.r_y, b.r_z
            );
        }
    }

    let axes = WignerAxes::default();
    let d = wigner_pure(&half, &axes)?.sup_distance(&wigner_pure(&root3, &axes)?)?;
    println!("sup |W_1/2 - W_sqrt3/2| = {d:.4} although the fidelities agree");

    let (kappa, fid, lambda) = MIXTURE_A_PARAMS;
    let rho = iso_fidelity_mixture(lambda, kappa, fid, PhaseSign::Positive)?;
    let b = bloch_vector(&rho)?;
    println!(
        "mixture kappa {kappa}, F {fid}, lambda {lambda}: |r| = {:.4}, purity {:.4}",
        b.norm(),
        rho.purity()
    );

    match iso_fidelity_state(0.01, 0.95, PhaseSign::Positive) {
        Err(e) => println!("lambda = 0.01, F = 0.95: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
