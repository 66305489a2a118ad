//! Trapped-ion motional state sculpture.
//!
//! A coherent motional state is reshaped into a target state by cycles of
//! carrier and red-sideband (Jaynes-Cummings) pulses followed by a
//! fluorescence projection. The crate covers the ideal recurrence, root
//! solving for the cycle parameters, an intensity-noise model with a
//! master-equation oracle, Wigner functions and a pulse optimizer.

// `!(x > y)` is used deliberately so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod lsq;
pub mod noise;
pub mod optimizer;
pub mod phase_space;
pub mod poly;
pub mod solver;

pub use error::{Result, SculptError};
pub use num_complex::Complex64;
