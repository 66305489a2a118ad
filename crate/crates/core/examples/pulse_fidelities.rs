//! Single-pulse fidelities under intensity noise and the carrier/JC
//! crossover in the Fock level.

use ion_sculpt::noise::{pulse_fidelity_c, pulse_fidelity_jc, NoiseParams};

fn main() {
    let p = NoiseParams::standard();
    println!(
        "Gamma = {:.0e} s, Omega = 2 pi x {:.0} Hz, eta = {}",
        p.gamma,
        p.omega / std::f64::consts::TAU,
        p.eta()
    );
    for t_us in [0.5, 1.0, 2.0, 5.0] {
        let t = t_us * 1e-6;
        println!(
            "t = {t_us:>3} us: F_C = {:.5}, F_JC(n=1) = {:.5}, F_JC(n=10) = {:.5}, F_JC(n=30) = {:.5}",
            pulse_fidelity_c(t, &p),
            pulse_fidelity_jc(1, t, &p),
            pulse_fidelity_jc(10, t, &p),
            pulse_fidelity_jc(30, t, &p)
        );
    }
    let t = 1e-6;
    let n = (1..200)
        .find(|&n| pulse_fidelity_jc(n, t, &p) < pulse_fidelity_c(t, &p))
        .unwrap();
    println!(
        "JC pulses become noisier than carrier pulses from n = {n} (1/eta^2 = {:.2})",
        1.0 / (p.eta() * p.eta())
    );
}
