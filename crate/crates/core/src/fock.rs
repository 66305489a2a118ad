//! Truncated Fock-space states: motional amplitudes, joint spin-motion
//! states and motional density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SculptError};

/// Largest weight a truncation is allowed to drop.
pub const TRUNCATION_TOL: f64 = 1e-10;

/// Threshold below which an amplitude counts as absent when locating N_d.
pub const SIGNIFICANT_AMP: f64 = 1e-12;

/// Pure motional state over |0>..|n_max>.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AmplitudesRepr", into = "AmplitudesRepr")]
pub struct MotionalAmplitudes {
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct AmplitudesRepr {
    n_max: usize,
    amps: Vec<Complex64>,
}

impl TryFrom<AmplitudesRepr> for MotionalAmplitudes {
    type Error = SculptError;

    fn try_from(r: AmplitudesRepr) -> Result<Self> {
        if r.amps.len() != r.n_max + 1 {
            return Err(SculptError::DimensionMismatch {
                left: r.n_max + 1,
                right: r.amps.len(),
            });
        }
        MotionalAmplitudes::new(r.amps)
    }
}

impl From<MotionalAmplitudes> for AmplitudesRepr {
    fn from(m: MotionalAmplitudes) -> Self {
        AmplitudesRepr {
            n_max: m.n_max(),
            amps: m.amps,
        }
    }
}

impl MotionalAmplitudes {
    /// Wraps raw amplitudes; `n_max` is `amps.len() - 1`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(SculptError::InvalidParameter("empty amplitude vector".into()));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(SculptError::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Fock state |n> truncated at `n_max`.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(SculptError::Index { index: n as i64 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_max + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, n_max).expect("0 <= n_max")
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude at `n`, zero beyond the truncation.
    pub fn get(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Returns a unit-norm copy. Fails on a (numerically) zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 1e-300) {
            return Err(SculptError::InvalidParameter(
                "state is not normalizable (zero norm)".into(),
            ));
        }
        let s = 1.0 / n2.sqrt();
        Ok(Self {
            amps: self.amps.iter().map(|a| a * s).collect(),
        })
    }

    /// N_d: the highest index with |amp| above [`SIGNIFICANT_AMP`].
    pub fn significant_max(&self) -> usize {
        self.amps.iter().rposition(|a| a.norm() > SIGNIFICANT_AMP).unwrap_or(0)
    }

    /// Copy re-truncated at `n_max`. Fails if dropped weight exceeds [`TRUNCATION_TOL`].
    pub fn resized(&self, n_max: usize) -> Result<Self> {
        let lost: f64 = self.amps.iter().skip(n_max + 1).map(|a| a.norm_sqr()).sum();
        if lost > TRUNCATION_TOL {
            return Err(SculptError::Truncation { n_max, lost });
        }
        let mut amps = self.amps.clone();
        amps.resize(n_max + 1, Complex64::new(0.0, 0.0));
        Ok(Self { amps })
    }

    /// |psi><psi| as a density matrix (no renormalization).
    pub fn projector(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        DensityMatrix { rho: &v * v.adjoint() }
    }
}

/// Poisson tail sum_{n > n_max} e^{-x} x^n / n!.
pub fn poisson_tail(x: f64, n_max: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // log of the first tail term, then sum forward until negligible
    let k0 = n_max + 1;
    let ln_term = -x + k0 as f64 * x.ln() - ln_factorial(k0);
    let mut term = ln_term.exp();
    let mut sum = 0.0;
    let mut k = k0;
    while term > 0.0 && (term > sum * 1e-17 || (k as f64) < x) {
        sum += term;
        k += 1;
        term *= x / k as f64;
        if k > k0 + 10_000 {
            break;
        }
    }
    sum
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Coherent-state amplitudes Lambda_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), n = 0..n_max.
///
/// Not renormalized. Fails with `Truncation` if the Poisson tail beyond
/// `n_max` exceeds [`TRUNCATION_TOL`].
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Result<MotionalAmplitudes> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(SculptError::InvalidParameter("non-finite alpha".into()));
    }
    let lost = poisson_tail(alpha.norm_sqr(), n_max);
    if lost > TRUNCATION_TOL {
        return Err(SculptError::Truncation { n_max, lost });
    }
    Ok(coherent_unchecked(alpha, n_max))
}

/// Coherent amplitudes without the tail check (for padded internal buffers).
pub(crate) fn coherent_unchecked(alpha: Complex64, n_max: usize) -> MotionalAmplitudes {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut a = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(a);
    for n in 0..n_max {
        a = a * alpha / ((n + 1) as f64).sqrt();
        amps.push(a);
    }
    MotionalAmplitudes { amps }
}

/// Default truncation order: max(N_d + 2M + 5, ceil(nbar + 10 sqrt(nbar + 1))).
pub fn default_n_max(n_d: usize, cycles: usize, nbar: f64) -> usize {
    let coherent = (nbar + 10.0 * (nbar + 1.0).sqrt()).ceil() as usize;
    (n_d + 2 * cycles + 5).max(coherent)
}

/// <a|b> = sum conj(a_n) b_n.
pub fn inner(a: &MotionalAmplitudes, b: &MotionalAmplitudes) -> Result<Complex64> {
    check_dims(a.amps.len(), b.amps.len())?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// |<target|state>|^2.
pub fn fidelity_pure(target: &MotionalAmplitudes, state: &MotionalAmplitudes) -> Result<f64> {
    Ok(inner(target, state)?.norm_sqr())
}

/// <target|rho|target>.
pub fn fidelity_mixed(target: &MotionalAmplitudes, rho: &DensityMatrix) -> Result<f64> {
    check_dims(target.amps.len(), rho.dim())?;
    let v = nalgebra::DVector::from_column_slice(&target.amps);
    Ok((v.adjoint() * &rho.rho * &v)[(0, 0)].re)
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(SculptError::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Electronic level of the ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];
}

/// Pure state over Fock x {up, down}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub up: Vec<Complex64>,
    pub down: Vec<Complex64>,
}

impl JointState {
    pub fn new(up: Vec<Complex64>, down: Vec<Complex64>) -> Result<Self> {
        check_dims(up.len(), down.len())?;
        if up.is_empty() {
            return Err(SculptError::InvalidParameter("empty joint state".into()));
        }
        Ok(Self { up, down })
    }

    /// Motional state times a definite spin.
    pub fn product(motion: &MotionalAmplitudes, spin: Spin) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); motion.amps.len()];
        match spin {
            Spin::Up => Self {
                up: motion.amps.clone(),
                down: zero,
            },
            Spin::Down => Self {
                up: zero,
                down: motion.amps.clone(),
            },
        }
    }

    /// |n, spin>.
    pub fn basis(n: usize, spin: Spin, n_max: usize) -> Result<Self> {
        Ok(Self::product(&MotionalAmplitudes::fock(n, n_max)?, spin))
    }

    pub fn n_max(&self) -> usize {
        self.up.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.iter().chain(&self.down).map(|a| a.norm_sqr()).sum()
    }

    /// Unnormalized motional component along <up|.
    pub fn project_up(&self) -> MotionalAmplitudes {
        MotionalAmplitudes { amps: self.up.clone() }
    }

    /// <self|other> over the joint space.
    pub fn inner(&self, other: &JointState) -> Result<Complex64> {
        check_dims(self.up.len(), other.up.len())?;
        Ok(self
            .up
            .iter()
            .zip(&other.up)
            .chain(self.down.iter().zip(&other.down))
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Motional density matrix over |0>..|n_max>.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    n_max: usize,
    rho: Vec<Vec<Complex64>>,
}

impl TryFrom<DensityRepr> for DensityMatrix {
    type Error = SculptError;

    fn try_from(r: DensityRepr) -> Result<Self> {
        let d = r.n_max + 1;
        check_dims(d, r.rho.len())?;
        for row in &r.rho {
            check_dims(d, row.len())?;
        }
        Ok(Self {
            rho: DMatrix::from_fn(d, d, |i, j| r.rho[i][j]),
        })
    }
}

impl From<DensityMatrix> for DensityRepr {
    fn from(m: DensityMatrix) -> Self {
        let d = m.dim();
        DensityRepr {
            n_max: d - 1,
            rho: (0..d).map(|i| (0..d).map(|j| m.rho[(i, j)]).collect()).collect(),
        }
    }
}

/// Outcome of [`DensityMatrix::check_physical`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalityReport {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl PhysicalityReport {
    pub fn is_physical(&self) -> bool {
        self.hermiticity_error <= 1e-12 && self.trace_error <= 1e-10 && self.min_eigenvalue >= -1e-9
    }
}

impl DensityMatrix {
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        check_dims(rho.nrows(), rho.ncols())?;
        if rho.nrows() == 0 {
            return Err(SculptError::InvalidParameter("empty density matrix".into()));
        }
        Ok(Self { rho })
    }

    /// Diagonal (incoherent) mixture of Fock states.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d = populations.len();
        Self::from_matrix(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(populations[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.rho[(n, m)]
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Unit-trace copy.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > 1e-300) {
            return Err(SculptError::DegenerateProjection { norm: tr });
        }
        Ok(Self {
            rho: self.rho.unscale(tr),
        })
    }

    /// Affine combination a*self + (1-a)*other.
    pub fn mix(&self, other: &DensityMatrix, a: f64) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            rho: self.rho.scale(a) + other.rho.scale(1.0 - a),
        })
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.rho + self.rho.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn check_physical(&self) -> PhysicalityReport {
        let herm = (&self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        PhysicalityReport {
            hermiticity_error: herm,
            trace_error: (self.trace() - 1.0).abs(),
            min_eigenvalue: self.eigenvalues()[0],
        }
    }

    /// Same matrix re-truncated (zero-padded or cut) at `n_max`.
    pub fn resized(&self, n_max: usize) -> Self {
        let d = n_max + 1;
        let old = self.dim();
        Self {
            rho: DMatrix::from_fn(d, d, |i, j| {
                if i < old && j < old {
                    self.rho[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }
}

/// Trace distance (1/2) sum |eig(a - b)|.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let diff = &a.rho - &b.rho;
    let h = (&diff + diff.adjoint()).scale(0.5);
    Ok(0.5 * h.symmetric_eigenvalues().iter().map(|e| e.abs()).sum::<f64>())
}
