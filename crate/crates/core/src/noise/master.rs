//! Exact noisy evolution of spin ⊗ Fock density matrices.
//!
//! Averaging `exp(−iHt')` over `t' ~ N(t, Γt)` gives, in the eigenbasis of
//! the pulse Hamiltonian, `ρ_ab → ρ_ab exp(−iΔt − Γ t Δ² / 2)` with
//! `Δ = E_a − E_b`. This is the reference the closed-form elements are
//! checked against.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dynamics::{PulseKind, PulseSpec};
use crate::error::{Result, SculptError};
use crate::fock::{DensityMatrix, JointState, Spin};

type CMat = DMatrix<Complex64>;

/// Density matrix over Fock ⊗ spin stored as four Fock-indexed blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDensity {
    pub uu: CMat,
    pub ud: CMat,
    pub du: CMat,
    pub dd: CMat,
}

impl JointDensity {
    pub fn zeros(n_max: usize) -> Self {
        let z = CMat::zeros(n_max + 1, n_max + 1);
        Self {
            uu: z.clone(),
            ud: z.clone(),
            du: z.clone(),
            dd: z,
        }
    }

    pub fn from_pure(s: &JointState) -> Self {
        let outer = |a: &[Complex64], b: &[Complex64]| CMat::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj());
        Self {
            uu: outer(&s.up, &s.up),
            ud: outer(&s.up, &s.down),
            du: outer(&s.down, &s.up),
            dd: outer(&s.down, &s.down),
        }
    }

    /// `ρ ⊗ |spin⟩⟨spin|`.
    pub fn from_motional(rho: &DensityMatrix, spin: Spin) -> Self {
        let mut out = Self::zeros(rho.n_max());
        match spin {
            Spin::Up => out.uu = rho.matrix().clone(),
            Spin::Down => out.dd = rho.matrix().clone(),
        }
        out
    }

    pub fn n_max(&self) -> usize {
        self.uu.nrows() - 1
    }

    /// The block ⟨·,j| ρ |·,k⟩.
    pub fn block(&self, j: Spin, k: Spin) -> &CMat {
        match (j, k) {
            (Spin::Up, Spin::Up) => &self.uu,
            (Spin::Up, Spin::Down) => &self.ud,
            (Spin::Down, Spin::Up) => &self.du,
            (Spin::Down, Spin::Down) => &self.dd,
        }
    }

    pub fn block_mut(&mut self, j: Spin, k: Spin) -> &mut CMat {
        match (j, k) {
            (Spin::Up, Spin::Up) => &mut self.uu,
            (Spin::Up, Spin::Down) => &mut self.ud,
            (Spin::Down, Spin::Up) => &mut self.du,
            (Spin::Down, Spin::Down) => &mut self.dd,
        }
    }

    /// Full matrix with index `n` for |n,↑⟩ and `n_max + 1 + n` for |n,↓⟩.
    pub fn to_full(&self) -> CMat {
        let d = self.n_max() + 1;
        let mut m = CMat::zeros(2 * d, 2 * d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.uu);
        m.view_mut((0, d), (d, d)).copy_from(&self.ud);
        m.view_mut((d, 0), (d, d)).copy_from(&self.du);
        m.view_mut((d, d), (d, d)).copy_from(&self.dd);
        m
    }

    pub fn from_full(m: &CMat) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
            return Err(SculptError::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let d = m.nrows() / 2;
        Ok(Self {
            uu: m.view((0, 0), (d, d)).into_owned(),
            ud: m.view((0, d), (d, d)).into_owned(),
            du: m.view((d, 0), (d, d)).into_owned(),
            dd: m.view((d, d), (d, d)).into_owned(),
        })
    }

    pub fn trace(&self) -> f64 {
        (self.uu.trace() + self.dd.trace()).re
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn expectation(&self, s: &JointState) -> Result<f64> {
        if s.n_max() != self.n_max() {
            return Err(SculptError::DimensionMismatch {
                left: s.n_max(),
                right: self.n_max(),
            });
        }
        let v: Vec<Complex64> = s.up.iter().chain(s.down.iter()).copied().collect();
        let v = nalgebra::DVector::from_vec(v);
        Ok((v.adjoint() * self.to_full() * &v)[(0, 0)].re)
    }

    /// Pads with zeros or cuts every block to `n_max`.
    pub fn resized(&self, n_max: usize) -> Self {
        let f = |b: &CMat| {
            CMat::from_fn(n_max + 1, n_max + 1, |i, j| {
                if i < b.nrows() && j < b.ncols() {
                    b[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        };
        Self {
            uu: f(&self.uu),
            ud: f(&self.ud),
            du: f(&self.du),
            dd: f(&self.dd),
        }
    }
}

/// Pulse Hamiltonian in the `to_full` ordering, consistent with
/// [`crate::dynamics::carrier_evolve`] and [`crate::dynamics::jc_evolve`].
pub fn pulse_hamiltonian(pulse: &PulseSpec, n_max: usize) -> CMat {
    let d = n_max + 1;
    let mut h = CMat::zeros(2 * d, 2 * d);
    let phase = Complex64::from_polar(1.0, pulse.phase);
    match pulse.kind {
        PulseKind::Carrier => {
            for n in 0..d {
                let v = pulse.rabi * phase.conj();
                h[(n, d + n)] = v;
                h[(d + n, n)] = v.conj();
            }
        }
        PulseKind::JaynesCummings => {
            let g = pulse.g();
            for n in 1..d {
                let v = Complex64::i() * phase * g * (n as f64).sqrt();
                h[(n - 1, d + n)] = v;
                h[(d + n, n - 1)] = v.conj();
            }
        }
    }
    h
}

/// Eigenvectors (columns) and eigenvalues of a Hermitian matrix whose
/// couplings split it into small independent blocks.
///
/// Each pulse Hamiltonian only couples pairs of levels, so diagonalizing
/// the blocks separately keeps the basis exact to rounding.
fn block_eigen(h: &CMat) -> (CMat, Vec<f64>) {
    let d = h.nrows();
    let mut comp = vec![usize::MAX; d];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for start in 0..d {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            for j in 0..d {
                if comp[j] == usize::MAX && h[(i, j)] != Complex64::new(0.0, 0.0) {
                    comp[j] = id;
                    members.push(j);
                }
            }
            k += 1;
        }
        blocks.push(members);
    }
    let mut v = CMat::zeros(d, d);
    let mut e = vec![0.0; d];
    for members in blocks {
        let sub = CMat::from_fn(members.len(), members.len(), |a, b| h[(members[a], members[b])]);
        let eig = sub.symmetric_eigen();
        for (col, &target) in members.iter().enumerate() {
            e[target] = eig.eigenvalues[col];
            for (row, &i) in members.iter().enumerate() {
                v[(i, target)] = eig.eigenvectors[(row, col)];
            }
        }
    }
    (v, e)
}

/// Averaged evolution of `rho` under one noisy pulse.
pub fn evolve_master(rho: &JointDensity, pulse: &PulseSpec) -> Result<JointDensity> {
    pulse.validate()?;
    let h = pulse_hamiltonian(pulse, rho.n_max());
    let (v, e) = block_eigen(&h);
    let mut r = v.adjoint() * rho.to_full() * &v;
    let (t, gamma) = (pulse.duration, pulse.gamma);
    for a in 0..r.nrows() {
        for b in 0..r.ncols() {
            let delta = e[a] - e[b];
            r[(a, b)] *= Complex64::from_polar((-gamma * t * delta * delta / 2.0).exp(), -delta * t);
        }
    }
    JointDensity::from_full(&(&v * r * v.adjoint()))
}
