//! Noise-free carrier and Jaynes-Cummings evolution and the ideal
//! sculpture cycle.
//!
//! Conventions: a carrier pulse of area `Ωt` and phase `φ` maps
//! `|n,↑⟩ → cos(Ωt)|n,↑⟩ − i e^{iφ} sin(Ωt)|n,↓⟩` and
//! `|n,↓⟩ → cos(Ωt)|n,↓⟩ − i e^{−iφ} sin(Ωt)|n,↑⟩`. A red-sideband pulse
//! of area `gτ` maps `|n,↑⟩ → C_n|n,↑⟩ − e^{−iφ} S_n|n+1,↓⟩` and
//! `|n,↓⟩ → C_{n−1}|n,↓⟩ + e^{iφ} S_{n−1}|n−1,↑⟩` with
//! `C_n = cos(gτ√(n+1))`, `S_n = sin(gτ√(n+1))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SculptError};
use crate::fock::{coherent_amplitudes, fidelity_pure, JointState, MotionalAmplitudes, Spin, TRUNCATION_TOL};

/// Which interaction a pulse drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    Carrier,
    JaynesCummings,
}

/// One laser pulse with physical units (seconds, rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub kind: PulseKind,
    /// Duration t in seconds.
    pub duration: f64,
    /// Laser phase in radians.
    pub phase: f64,
    /// Carrier Rabi frequency Ω in rad/s.
    pub rabi: f64,
    /// Lamb-Dicke parameter η.
    pub lamb_dicke: f64,
    /// Noise scale Γ in seconds.
    pub gamma: f64,
}

impl PulseSpec {
    pub fn new(kind: PulseKind, duration: f64, phase: f64, rabi: f64, lamb_dicke: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            kind,
            duration,
            phase,
            rabi,
            lamb_dicke,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.duration >= 0.0
            && self.rabi > 0.0
            && self.lamb_dicke > 0.0
            && self.lamb_dicke < 1.0
            && self.gamma >= 0.0
            && self.phase.is_finite()
            && self.duration.is_finite()
            && self.rabi.is_finite()
            && self.gamma.is_finite();
        if ok {
            Ok(())
        } else {
            Err(SculptError::InvalidParameter(format!(
                "pulse needs t >= 0, Omega > 0, 0 < eta < 1, Gamma >= 0: {self:?}"
            )))
        }
    }

    /// Sideband coupling g = Ωη.
    pub fn g(&self) -> f64 {
        self.rabi * self.lamb_dicke
    }

    /// Dimensionless pulse area: Ωt for a carrier, gt for a JC pulse.
    pub fn area(&self) -> f64 {
        match self.kind {
            PulseKind::Carrier => self.rabi * self.duration,
            PulseKind::JaynesCummings => self.g() * self.duration,
        }
    }

    /// Applies the noise-free evolution of this pulse.
    pub fn evolve(&self, state: &JointState) -> Result<JointState> {
        match self.kind {
            PulseKind::Carrier => Ok(carrier_evolve(state, self.area(), self.phase)),
            PulseKind::JaynesCummings => jc_evolve(state, self.area(), self.phase),
        }
    }
}

/// Free parameters of one ideal sculpture cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleParams {
    pub beta: Complex64,
    pub epsilon: Complex64,
    pub g_tau: f64,
    pub phi: f64,
}

impl CycleParams {
    pub fn identity() -> Self {
        Self {
            beta: Complex64::new(0.0, 0.0),
            epsilon: Complex64::new(0.0, 0.0),
            g_tau: 0.0,
            phi: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = [
            self.beta.re,
            self.beta.im,
            self.epsilon.re,
            self.epsilon.im,
            self.g_tau,
            self.phi,
        ]
        .iter()
        .all(|x| x.is_finite());
        if finite && self.g_tau >= 0.0 {
            Ok(())
        } else {
            Err(SculptError::InvalidParameter(format!(
                "invalid cycle parameters {self:?}"
            )))
        }
    }
}

/// Carrier rotation of area `omega_t` and phase `phi`, applied per Fock index.
pub fn carrier_evolve(state: &JointState, omega_t: f64, phi: f64) -> JointState {
    let (s, c) = omega_t.sin_cos();
    let i = Complex64::i();
    let to_down = -i * Complex64::from_polar(s, phi);
    let to_up = -i * Complex64::from_polar(s, -phi);
    let up = state
        .up
        .iter()
        .zip(&state.down)
        .map(|(u, d)| u * c + d * to_up)
        .collect();
    let down = state
        .up
        .iter()
        .zip(&state.down)
        .map(|(u, d)| d * c + u * to_down)
        .collect();
    JointState { up, down }
}

/// C_n, S_n for the red sideband; `n = -1` gives (1, 0).
fn jc_cs(g_tau: f64, n: i64) -> (f64, f64) {
    let (s, c) = (g_tau * ((n + 1) as f64).sqrt()).sin_cos();
    (c, s)
}

/// Red-sideband (Jaynes-Cummings) pulse of area `g_tau` and phase `phi`.
///
/// `|n_max,↑⟩` has no partner inside the truncation; it is left uncoupled,
/// and a `Truncation` error is raised if the weight it would send past
/// `n_max` exceeds the truncation tolerance.
pub fn jc_evolve(state: &JointState, g_tau: f64, phi: f64) -> Result<JointState> {
    let n_max = state.n_max();
    let (_, s_top) = jc_cs(g_tau, n_max as i64);
    let spill = (state.up[n_max] * s_top).norm_sqr();
    if spill > TRUNCATION_TOL {
        return Err(SculptError::Truncation { n_max, lost: spill });
    }
    let e = Complex64::from_polar(1.0, phi);
    let mut up = state.up.clone();
    let mut down = state.down.clone();
    for n in 0..n_max {
        let (c, s) = jc_cs(g_tau, n as i64);
        let u = state.up[n];
        let d = state.down[n + 1];
        up[n] = u * c + e * s * d;
        down[n + 1] = d * c - e.conj() * s * u;
    }
    Ok(JointState { up, down })
}

/// Coefficients (const, β, ε, βε) of the bilinear form Γ_n = a + bβ + cε + eβε.
pub fn recurrence_coefficients(lam: &MotionalAmplitudes, g_tau: f64, phi: f64, n: usize) -> [Complex64; 4] {
    let (c_n, s_n) = jc_cs(g_tau, n as i64);
    let (c_prev, _) = jc_cs(g_tau, n as i64 - 1);
    let lam_n = lam.get(n);
    let a = lam_n * c_n;
    let b = Complex64::from_polar(s_n, phi) * lam.get(n + 1);
    let cc = if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        let (_, s_prev) = jc_cs(g_tau, n as i64 - 1);
        -Complex64::from_polar(s_prev, -phi) * lam.get(n - 1)
    };
    let e = lam_n * c_prev;
    [a, b, cc, e]
}

/// Unnormalized Γ_n for n = 0..=upto.
pub fn recurrence(lam: &MotionalAmplitudes, p: &CycleParams, upto: usize) -> Vec<Complex64> {
    (0..=upto)
        .map(|n| {
            let [a, b, c, e] = recurrence_coefficients(lam, p.g_tau, p.phi, n);
            a + b * p.beta + c * p.epsilon + e * p.beta * p.epsilon
        })
        .collect()
}

/// One ideal cycle: returns the renormalized sculpted amplitudes and the
/// probability of the no-fluorescence outcome.
pub fn sculpt_cycle_ideal(lam_in: &MotionalAmplitudes, p: &CycleParams) -> Result<(MotionalAmplitudes, f64)> {
    p.validate()?;
    let n_max = lam_in.n_max();
    let mut gamma = recurrence(lam_in, p, n_max + 1);
    let spilled = gamma.pop().expect("n_max + 2 entries").norm_sqr();
    let total: f64 = gamma.iter().map(|g| g.norm_sqr()).sum();
    if !(total >= 1e-14) {
        return Err(SculptError::DegenerateProjection { norm: total });
    }
    if spilled / total > TRUNCATION_TOL {
        return Err(SculptError::Truncation {
            n_max,
            lost: spilled / total,
        });
    }
    let prob = total / ((1.0 + p.beta.norm_sqr()) * (1.0 + p.epsilon.norm_sqr()));
    let out = MotionalAmplitudes::new(gamma)?.normalized()?;
    Ok((out, prob))
}

/// Result of chaining ideal cycles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealRun {
    pub state: MotionalAmplitudes,
    pub fidelity: f64,
    pub probability: f64,
    pub cycle_probabilities: Vec<f64>,
}

/// Runs `plan` from the coherent state |alpha⟩ truncated like `target`.
///
/// Plans shorter than `min_cycles(target)` are run as given; they simply
/// cannot reach unit fidelity.
pub fn sculpt_run_ideal(alpha: Complex64, plan: &[CycleParams], target: &MotionalAmplitudes) -> Result<IdealRun> {
    let mut state = coherent_amplitudes(alpha, target.n_max())?;
    let mut probs = Vec::with_capacity(plan.len());
    for p in plan {
        let (next, prob) = sculpt_cycle_ideal(&state, p)?;
        state = next;
        probs.push(prob);
    }
    Ok(IdealRun {
        fidelity: fidelity_pure(target, &state)?,
        probability: probs.iter().product(),
        cycle_probabilities: probs,
        state,
    })
}

/// Carrier (Ωt, φ) taking |↑⟩ to N_β(|↑⟩ + β|↓⟩).
pub fn beta_to_pulse(beta: Complex64) -> (f64, f64) {
    (beta.norm().atan(), wrap_phase((Complex64::i() * beta).arg()))
}

/// Carrier (Ωt, φ) rotating |χ⟩ = N_ε(|↑⟩ + ε̄|↓⟩) onto |↑⟩.
pub fn epsilon_to_pulse(epsilon: Complex64) -> (f64, f64) {
    (
        epsilon.norm().atan(),
        wrap_phase((-Complex64::i() * epsilon.conj()).arg()),
    )
}

/// Phase reduced to [0, 2π).
pub fn wrap_phase(phi: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = phi.rem_euclid(t);
    if r >= t {
        0.0
    } else {
        r
    }
}

/// Explicit pulse-by-pulse cycle: carrier(β) → JC → carrier(ε) → ⟨↑|.
///
/// Returns the unnormalized projected amplitudes; their squared norm is the
/// cycle probability. Works on a copy padded by one level so the JC pulse
/// never truncates, then cuts back to the input size.
pub fn cycle_pipeline(lam_in: &MotionalAmplitudes, p: &CycleParams) -> Result<MotionalAmplitudes> {
    let n_max = lam_in.n_max();
    let padded = lam_in.resized(n_max + 1)?;
    let (t1, f1) = beta_to_pulse(p.beta);
    let (t3, f3) = epsilon_to_pulse(p.epsilon);
    let s = JointState::product(&padded, Spin::Up);
    let s = carrier_evolve(&s, t1, f1);
    let s = jc_evolve(&s, p.g_tau, p.phi)?;
    let s = carrier_evolve(&s, t3, f3);
    let mut up = s.up;
    up.truncate(n_max + 1);
    MotionalAmplitudes::new(up)
}
