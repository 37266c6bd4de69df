//! Riemann–Liouville fractional integrals and derivatives of sampled
//! functions, their closed forms on constants and shifted powers, and Γ.

mod closed_form;
mod gamma;
mod grid;
mod operators;
mod sampled;

pub use closed_form::{closed_form_left_derivative, AtomKind, ClosedFormAtom};
pub use gamma::{gamma, recip_gamma};
pub use grid::{FracOrder, Grid};
pub use operators::{
    classical_derivative, left_rl_derivative, left_rl_derivative_with, left_rl_integral,
    right_rl_derivative, right_rl_derivative_with, right_rl_integral, Scheme,
};
pub(crate) use operators::l1_weights;
pub use sampled::{Endpoint, SampledFunction};
