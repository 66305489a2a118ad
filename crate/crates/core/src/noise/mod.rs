//! Intensity-fluctuation noise.
//!
//! Pulse-time jitter with variance `Γt` dephases each pulse in its own
//! eigenbasis. The module offers closed-form averaged matrix elements, the
//! noisy sculpted density matrix built from them, pulse-level fidelities and
//! an independent master-equation solver used as an oracle.

mod cycle;
mod elements;
mod kernel;
mod master;
mod term_sum;

pub use cycle::{noisy_cycle, noisy_run, oracle_noisy_cycle, sculpt_noisy_single_cycle, NoisyCycle, NoisyRun};
pub use elements::{carrier_noise_element, jc_noise_element, AbcdTable};
pub use kernel::noisy_summary;
pub use master::{evolve_master, pulse_hamiltonian, JointDensity};
pub use term_sum::{term_sum_element, term_sum_matrix};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{beta_to_pulse, epsilon_to_pulse, CycleParams, PulseKind, PulseSpec};
use crate::error::{Result, SculptError};

/// Default Lamb-Dicke parameter.
pub const DEFAULT_ETA: f64 = 0.202;
/// Default carrier Rabi frequency in rad/s.
pub const DEFAULT_OMEGA: f64 = 2.0 * std::f64::consts::PI * 475e3;
/// Default noise scale in seconds.
pub const DEFAULT_GAMMA: f64 = 1e-8;

/// Noise scale and the two pulse frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Γ in seconds.
    pub gamma: f64,
    /// Carrier Rabi frequency Ω in rad/s.
    pub omega: f64,
    /// Sideband coupling g = Ωη in rad/s.
    pub g: f64,
}

impl NoiseParams {
    pub fn new(gamma: f64, omega: f64, eta: f64) -> Result<Self> {
        let p = Self {
            gamma,
            omega,
            g: omega * eta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Γ = 1e-8 s, Ω = 2π·475 kHz, η = 0.202.
    pub fn standard() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            omega: DEFAULT_OMEGA,
            g: DEFAULT_OMEGA * DEFAULT_ETA,
        }
    }

    /// Default frequencies with Γ = 0.
    pub fn noiseless() -> Self {
        Self {
            gamma: 0.0,
            ..Self::standard()
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn eta(&self) -> f64 {
        self.g / self.omega
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.gamma >= 0.0
            && self.gamma.is_finite()
            && self.omega > 0.0
            && self.omega.is_finite()
            && self.g > 0.0
            && self.g.is_finite();
        if ok {
            Ok(())
        } else {
            Err(SculptError::InvalidParameter(format!(
                "noise needs Gamma >= 0, Omega > 0, g > 0: {self:?}"
            )))
        }
    }

    fn pulse(&self, kind: PulseKind, area: f64, phase: f64) -> PulseSpec {
        let rate = match kind {
            PulseKind::Carrier => self.omega,
            PulseKind::JaynesCummings => self.g,
        };
        PulseSpec {
            kind,
            duration: area / rate,
            phase,
            rabi: self.omega,
            lamb_dicke: self.eta(),
            gamma: self.gamma,
        }
    }
}

/// The three pulses of one cycle as dimensionless areas and phases.
///
/// Phases follow [`crate::dynamics::carrier_evolve`] and
/// [`crate::dynamics::jc_evolve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseAngles {
    pub omega_t1: f64,
    pub phi1: f64,
    pub g_t2: f64,
    pub phi2: f64,
    pub omega_t3: f64,
    pub phi3: f64,
}

impl PulseAngles {
    pub fn from_array(x: [f64; 6]) -> Self {
        Self {
            omega_t1: x[0],
            phi1: x[1],
            g_t2: x[2],
            phi2: x[3],
            omega_t3: x[4],
            phi3: x[5],
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.omega_t1, self.phi1, self.g_t2, self.phi2, self.omega_t3, self.phi3]
    }

    /// Pulses realizing the ideal cycle (β, ε, gτ, φ).
    pub fn from_cycle(c: &CycleParams) -> Self {
        let (omega_t1, phi1) = beta_to_pulse(c.beta);
        let (omega_t3, phi3) = epsilon_to_pulse(c.epsilon);
        Self {
            omega_t1,
            phi1,
            g_t2: c.g_tau,
            phi2: c.phi,
            omega_t3,
            phi3,
        }
    }

    /// Ideal-cycle parameters with the same action (inverse of `from_cycle` for Ωt < π/2).
    pub fn to_cycle(&self) -> CycleParams {
        let i = Complex64::i();
        let beta = -i * Complex64::from_polar(self.omega_t1.tan(), self.phi1);
        let epsilon = -i * Complex64::from_polar(self.omega_t3.tan(), -self.phi3);
        CycleParams {
            beta,
            epsilon,
            g_tau: self.g_t2,
            phi: self.phi2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.to_array();
        if a.iter().all(|x| x.is_finite()) && self.omega_t1 >= 0.0 && self.g_t2 >= 0.0 && self.omega_t3 >= 0.0 {
            Ok(())
        } else {
            Err(SculptError::InvalidParameter(format!(
                "pulse areas must be finite and >= 0: {self:?}"
            )))
        }
    }

    /// Durations (t1, t2, t3) in seconds.
    pub fn durations(&self, p: &NoiseParams) -> (f64, f64, f64) {
        (self.omega_t1 / p.omega, self.g_t2 / p.g, self.omega_t3 / p.omega)
    }

    /// The three pulses as physical specs.
    pub fn pulses(&self, p: &NoiseParams) -> [PulseSpec; 3] {
        [
            p.pulse(PulseKind::Carrier, self.omega_t1, self.phi1),
            p.pulse(PulseKind::JaynesCummings, self.g_t2, self.phi2),
            p.pulse(PulseKind::Carrier, self.omega_t3, self.phi3),
        ]
    }
}

/// Fidelity of a noisy carrier pulse of duration `t`: ½ + ½e^{−2ΓΩ²t}.
pub fn pulse_fidelity_c(t: f64, p: &NoiseParams) -> f64 {
    0.5 + 0.5 * (-2.0 * p.gamma * p.omega * p.omega * t).exp()
}

/// Fidelity of a noisy JC pulse on |n,↓⟩: ½ + ½e^{−2nΓg²t}.
pub fn pulse_fidelity_jc(n: usize, t: f64, p: &NoiseParams) -> f64 {
    0.5 + 0.5 * (-2.0 * n as f64 * p.gamma * p.g * p.g * t).exp()
}
