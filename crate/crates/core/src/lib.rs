//! Numerical fractional isoperimetric calculus of variations in the
//! Riemann–Liouville sense.
//!
//! - [`frac_kernels`]: RL integrals/derivatives on uniform grids, Γ.
//! - [`problems`]: isoperimetric problem data, augmented Lagrangian,
//!   Euler–Lagrange residuals and normality diagnostics.
//! - [`noether`]: the operator D_t^γ(f, h), invariance checks and the
//!   fractional Noether conservation-law residuals.
//! - [`hamiltonian`]: fractional optimal control, Pontryagin residuals and
//!   the Hamiltonian-form conservation laws.
//! - [`solver`]: direct transcription of the isoperimetric problem solved by
//!   damped Newton.

pub mod error;
pub mod frac_kernels;
pub mod hamiltonian;
pub mod noether;
pub mod problems;
pub mod solver;

pub use error::{Error, Result};
