//! The intensity-noise master equation for single pulses on the joint
//! spin-motion density matrix.

use ion_sculpt::dynamics::{PulseKind, PulseSpec};
use ion_sculpt::fock::{JointState, Spin};
use ion_sculpt::noise::{evolve_master, pulse_fidelity_c, pulse_fidelity_jc, JointDensity, NoiseParams};

fn main() -> ion_sculpt::Result<()> {
    let p = NoiseParams::standard();
    let n_max = 12;
    for t in [0.2e-6, 1e-6, 3e-6] {
        let carrier = PulseSpec::new(PulseKind::Carrier, t, 0.3, p.omega, p.eta(), p.gamma)?;
        let start = JointState::basis(0, Spin::Up, n_max)?;
        let rho = evolve_master(&JointDensity::from_pure(&start), &carrier)?;
        let ideal = carrier.evolve(&start)?;
        println!(
            "carrier t = {:.1} us: overlap {:.12}, closed form {:.12}",
            t * 1e6,
            rho.expectation(&ideal)?,
            pulse_fidelity_c(t, &p)
        );

        let n = 4;
        let jc = PulseSpec::new(PulseKind::JaynesCummings, t, 0.3, p.omega, p.eta(), p.gamma)?;
        let start = JointState::basis(n, Spin::Down, n_max)?;
        let rho = evolve_master(&JointDensity::from_pure(&start), &jc)?;
        println!(
            "JC n = {n} t = {:.1} us: overlap {:.12}, closed form {:.12}, trace {:.15}",
            t * 1e6,
            rho.expectation(&jc.evolve(&start)?)?,
            pulse_fidelity_jc(n, t, &p),
            rho.trace()
        );
    }
    Ok(())
}
