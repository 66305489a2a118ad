//! Flat JSON run configuration with `ION_SCULPT_*` environment overrides.
//!
//! Precedence, lowest first: built-in defaults, the config file, environment
//! variables, command-line flags.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::CliError;
use crate::dynamics::CycleParams;
use crate::fock::MotionalAmplitudes;
use crate::noise::{NoiseParams, PulseAngles, DEFAULT_ETA, DEFAULT_GAMMA, DEFAULT_OMEGA};
use crate::optimizer::Objective;
use crate::phase_space::WignerAxes;

/// Prefix of environment variables overriding config keys.
pub const ENV_PREFIX: &str = "ION_SCULPT_";

/// Named targets.
pub const PRESETS: [&str; 2] = ["phase-state-N2", "xi"];

/// Initial mean phonon numbers of the default table scan.
pub const DEFAULT_NBAR_VALUES: [f64; 7] = [0.04, 0.09, 0.16, 0.25, 0.36, 0.49, 0.64];

/// Every knob of every subcommand; unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Named target; ignored when `target` is given.
    pub preset: String,
    /// Real parts of the target amplitudes c_0, c_1, ...
    pub target: Option<Vec<f64>>,
    /// Imaginary parts (zero when absent).
    pub target_im: Option<Vec<f64>>,
    /// Mean phonon number of the initial coherent state (α = √n̄ real).
    pub nbar: f64,
    /// Explicit complex α as [re, im]; overrides `nbar`.
    pub alpha: Option<[f64; 2]>,
    /// Noise scale Γ in seconds; absent means the default for noisy
    /// commands and an ideal scan for `table1`.
    pub gamma: Option<f64>,
    pub omega: f64,
    pub eta: f64,
    pub budget: usize,
    pub seed: u64,
    pub xi: f64,
    pub zeta: f64,
    pub objective: Objective,
    /// Search range of n̄ for the noisy optimizer as [lo, hi]; defaults to `nbar`.
    pub nbar_range: Option<[f64; 2]>,
    pub jobs: Option<usize>,
    pub out: PathBuf,
    pub emit_wigner: bool,
    pub emit_table: bool,
    pub emit_json: bool,
    /// Explicit ideal cycles (skip root solving).
    pub cycles: Option<Vec<CycleParams>>,
    /// Explicit noisy pulse sequence (skip root solving and optimization).
    pub pulses: Option<Vec<PulseAngles>>,
    /// Fixed JC area gτ for single-cycle solving; scanned when absent.
    pub g_tau: Option<f64>,
    /// Fixed JC phase φ; 0 when only `g_tau` is given.
    pub phi: Option<f64>,
    /// Random starts for multi-cycle root solving.
    pub multi_starts: usize,
    pub nbar_values: Vec<f64>,
    /// Allowed deviation of P and F in `table1 --check`.
    pub tolerance_pf: f64,
    /// Allowed deviation of R in `table1 --check`.
    pub tolerance_r: f64,
    pub wigner_half_width: f64,
    pub wigner_points: usize,
    /// Iso-fidelity construction: fidelity against Ξ.
    pub fidelity: f64,
    /// Optional single λ to construct (validated against the cone).
    pub lambda: Option<f64>,
    /// Optional coherence scale of the mixed family.
    pub kappa: Option<f64>,
    pub cone_samples: usize,
    /// State file for `wigner`.
    pub state_file: Option<PathBuf>,
    /// Longest pulse duration in the fidelity curves (seconds).
    pub t_max: f64,
    pub t_points: usize,
    /// Largest Fock level in the JC fidelity curves.
    pub n_levels: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: PRESETS[0].into(),
            target: None,
            target_im: None,
            nbar: 0.25,
            alpha: None,
            gamma: None,
            omega: DEFAULT_OMEGA,
            eta: DEFAULT_ETA,
            budget: 20_000,
            seed: 0,
            xi: 4.0,
            zeta: 0.5,
            objective: Objective::Rate,
            nbar_range: None,
            jobs: None,
            out: PathBuf::from("out"),
            emit_wigner: true,
            emit_table: true,
            emit_json: true,
            cycles: None,
            pulses: None,
            g_tau: None,
            phi: None,
            multi_starts: 32,
            nbar_values: DEFAULT_NBAR_VALUES.to_vec(),
            tolerance_pf: 0.02,
            tolerance_r: 0.03,
            wigner_half_width: 4.0,
            wigner_points: 161,
            fidelity: (2.0 + 3f64.sqrt()) / 4.0,
            lambda: None,
            kappa: None,
            cone_samples: 101,
            state_file: None,
            t_max: 10e-6,
            t_points: 101,
            n_levels: 40,
        }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses an environment value: JSON if it parses, a plain string otherwise.
fn env_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

impl RunConfig {
    /// Defaults, then `path` (if any), then `ION_SCULPT_<KEY>` variables from `env`.
    pub fn load<I>(path: Option<&Path>, env: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut map = match serde_json::to_value(RunConfig::default()).expect("defaults serialize") {
            Value::Object(m) => m,
            _ => unreachable!("struct serializes to an object"),
        };
        if let Some(p) = path {
            let text = std::fs::read_to_string(p).map_err(|e| bad(format!("cannot read {}: {e}", p.display())))?;
            let file: Map<String, Value> =
                serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", p.display())))?;
            map.extend(file);
        }
        for (k, v) in env {
            if let Some(key) = k.strip_prefix(ENV_PREFIX) {
                map.insert(key.to_ascii_lowercase(), env_value(&v));
            }
        }
        let cfg: RunConfig = serde_json::from_value(Value::Object(map)).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        let finite_pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(bad(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        if !(self.nbar.is_finite() && self.nbar >= 0.0) {
            return Err(bad(format!("nbar must be >= 0, got {}", self.nbar)));
        }
        if let Some(g) = self.gamma {
            if !(g.is_finite() && g >= 0.0) {
                return Err(bad(format!("gamma must be >= 0, got {g}")));
            }
        }
        finite_pos("omega", self.omega)?;
        finite_pos("eta", self.eta)?;
        finite_pos("wigner_half_width", self.wigner_half_width)?;
        finite_pos("t_max", self.t_max)?;
        if self.budget == 0 {
            return Err(bad("budget must be >= 1"));
        }
        if self.wigner_points < 2 || self.t_points < 2 || self.cone_samples < 2 {
            return Err(bad("wigner_points, t_points and cone_samples must be >= 2"));
        }
        if self.jobs == Some(0) {
            return Err(bad("jobs must be >= 1"));
        }
        if !(self.xi.is_finite() && self.zeta.is_finite()) {
            return Err(bad("xi and zeta must be finite"));
        }
        if let Some([lo, hi]) = self.nbar_range {
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
                return Err(bad(format!("nbar_range must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")));
            }
        }
        if self.nbar_values.is_empty() || self.nbar_values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(bad("nbar_values must be a non-empty list of values >= 0"));
        }
        if !(self.fidelity.is_finite() && (0.0..=1.0).contains(&self.fidelity)) {
            return Err(bad(format!("fidelity must lie in [0, 1], got {}", self.fidelity)));
        }
        self.target()?;
        Ok(())
    }

    /// Normalized target state.
    pub fn target(&self) -> Result<MotionalAmplitudes, CliError> {
        let amps: Vec<Complex64> = match &self.target {
            Some(re) => {
                let im = self.target_im.clone().unwrap_or_else(|| vec![0.0; re.len()]);
                if im.len() != re.len() {
                    return Err(bad(format!(
                        "target has {} entries but target_im {}",
                        re.len(),
                        im.len()
                    )));
                }
                re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect()
            }
            None => preset(&self.preset)?,
        };
        if amps.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(bad("target amplitudes must be finite"));
        }
        MotionalAmplitudes::new(amps)
            .and_then(|t| t.normalized())
            .map_err(|e| bad(format!("target is not normalizable: {e}")))
    }

    /// Initial coherent amplitude.
    pub fn alpha(&self) -> Complex64 {
        match self.alpha {
            Some([re, im]) => Complex64::new(re, im),
            None => Complex64::new(self.nbar.sqrt(), 0.0),
        }
    }

    /// Noise parameters, falling back to the default Γ.
    pub fn noise(&self) -> Result<NoiseParams, CliError> {
        NoiseParams::new(self.gamma.unwrap_or(DEFAULT_GAMMA), self.omega, self.eta).map_err(|e| bad(e.to_string()))
    }

    pub fn wigner_axes(&self) -> WignerAxes {
        WignerAxes::square(self.wigner_half_width, self.wigner_points)
    }
}

/// Amplitudes of a named preset.
pub fn preset(name: &str) -> Result<Vec<Complex64>, CliError> {
    let r = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    match name {
        "phase-state-N2" => Ok(r(&[1.0, 1.0, 1.0])),
        "xi" => Ok(r(&[1.0, 1.0])),
        _ => Err(bad(format!("unknown preset {name:?}; known: {}", PRESETS.join(", ")))),
    }
}
