//! Discrete Riemann–Liouville integrals and derivatives on a uniform grid.
//!
//! Integrals use product-trapezoid weights (exact for piecewise-linear data).
//! The default derivative is the L1 product-integration scheme: the data is
//! replaced by its piecewise-linear interpolant f̃, and D ∘ I^{1−α} f̃ is
//! evaluated exactly at the nodes,
//!
//! ```text
//! D^α f(t_k) = f_0 (t_k − a)^{−α} / Γ(1−α)
//!            + h^{−α}/Γ(2−α) · Σ_{j<k} [(k−j)^{1−α} − (k−j−1)^{1−α}] (f_{j+1} − f_j)
//! ```
//!
//! This is exact for constants and linear functions and linear in f.
//! Right-sided operators are the mirror images under t ↦ a + b − t and use
//! the same summation order, so reflection duality holds node for node.
//! Grünwald–Letnikov is available as an independent first-order cross-check.

use crate::error::{Error, Result};

use super::gamma::{gamma, recip_gamma};
use super::grid::FracOrder;
use super::sampled::{Endpoint, SampledFunction};

/// Discretization used for fractional derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    L1,
    GrunwaldLetnikov,
}

/// L1 history weights b_l = (l+1)^{1−α} − l^{1−α}, l = 0..len.
pub(crate) fn l1_weights(alpha: f64, len: usize) -> Vec<f64> {
    let p = 1.0 - alpha;
    (0..len)
        .map(|l| {
            let l = l as f64;
            (l + 1.0).powf(p) - l.powf(p)
        })
        .collect()
}

/// Grünwald–Letnikov weights w_j = (−1)^j C(α, j).
pub(crate) fn gl_weights(alpha: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len);
    let mut prev = 1.0;
    for j in 0..len {
        if j > 0 {
            prev *= 1.0 - (alpha + 1.0) / j as f64;
        }
        w.push(prev);
    }
    w
}

/// Product-trapezoid weights for ₐI_t^α at node k: coefficient of f_j, j = 0..=k.
fn integral_weights(alpha: f64, k: usize) -> Vec<f64> {
    if k == 0 {
        return vec![0.0];
    }
    let p = alpha + 1.0;
    let kf = k as f64;
    let mut w = Vec::with_capacity(k + 1);
    w.push((kf - 1.0).powf(p) - (kf - alpha - 1.0) * kf.powf(alpha));
    for j in 1..k {
        let d = (k - j) as f64;
        w.push((d + 1.0).powf(p) - 2.0 * d.powf(p) + (d - 1.0).powf(p));
    }
    w.push(1.0);
    w
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// Applies `kernel(values, k)` to each component, where `values` is the
/// component reordered so that index 0 is the base endpoint of the operator.
fn apply_by_component(
    f: &SampledFunction,
    side: Side,
    kernel: impl Fn(&[f64], usize) -> f64,
) -> Vec<f64> {
    let len = f.len();
    let dim = f.dim();
    let mut out = vec![0.0; len * dim];
    for c in 0..dim {
        let comp: Vec<f64> = match side {
            Side::Left => (0..len).map(|i| f.at(i)[c]).collect(),
            Side::Right => (0..len).rev().map(|i| f.at(i)[c]).collect(),
        };
        for k in 0..len {
            let node = match side {
                Side::Left => k,
                Side::Right => len - 1 - k,
            };
            out[node * dim + c] = kernel(&comp, k);
        }
    }
    out
}

fn rl_integral(f: &SampledFunction, order: FracOrder, side: Side) -> Result<SampledFunction> {
    let alpha = order.alpha();
    let h = f.grid().h();
    let scale = h.powf(alpha) / gamma(alpha + 2.0)?;
    let weights: Vec<Vec<f64>> = (0..f.len()).map(|k| integral_weights(alpha, k)).collect();
    let values = apply_by_component(f, side, |v, k| {
        let s: f64 = weights[k].iter().zip(v).map(|(w, x)| w * x).sum();
        scale * s
    });
    Ok(SampledFunction::from_raw(
        *f.grid(),
        f.dim(),
        values,
        f.is_singular_at(Endpoint::Left),
        f.is_singular_at(Endpoint::Right),
    ))
}

/// ₐI_t^α f at every node; the value at t_0 is 0.
pub fn left_rl_integral(f: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    rl_integral(f, order, Side::Left)
}

/// ₜI_b^α f at every node; the value at t_m is 0.
pub fn right_rl_integral(f: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    rl_integral(f, order, Side::Right)
}

fn check_derivative_order(order: FracOrder) -> Result<()> {
    let alpha = order.alpha();
    if alpha > 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    Ok(())
}

/// Classical derivative d/dt: central differences inside, second-order
/// one-sided differences at the endpoints.
pub fn classical_derivative(f: &SampledFunction) -> SampledFunction {
    let len = f.len();
    let h = f.grid().h();
    let values = apply_by_component(f, Side::Left, |v, k| {
        if k == 0 {
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        } else if k == len - 1 {
            (3.0 * v[k] - 4.0 * v[k - 1] + v[k - 2]) / (2.0 * h)
        } else {
            (v[k + 1] - v[k - 1]) / (2.0 * h)
        }
    });
    SampledFunction::from_raw(
        *f.grid(),
        f.dim(),
        values,
        f.is_singular_at(Endpoint::Left),
        f.is_singular_at(Endpoint::Right),
    )
}

fn rl_derivative(
    f: &SampledFunction,
    order: FracOrder,
    scheme: Scheme,
    side: Side,
) -> Result<SampledFunction> {
    check_derivative_order(order)?;
    let (base, far) = match side {
        Side::Left => (Endpoint::Left, Endpoint::Right),
        Side::Right => (Endpoint::Right, Endpoint::Left),
    };
    if f.is_singular_at(base) {
        return Err(Error::InvalidSamples(
            "cannot differentiate from an endpoint where the data is singular".into(),
        ));
    }
    if order.alpha() == 1.0 {
        let d = classical_derivative(f);
        return Ok(match side {
            Side::Left => d,
            Side::Right => d.scale(-1.0),
        });
    }

    let alpha = order.alpha();
    let h = f.grid().h();
    let len = f.len();
    let values = match scheme {
        Scheme::L1 => {
            let b = l1_weights(alpha, len);
            let c = h.powf(-alpha) * recip_gamma(2.0 - alpha);
            let c0 = recip_gamma(1.0 - alpha);
            apply_by_component(f, side, |v, k| {
                if k == 0 {
                    return f64::NAN;
                }
                let mut s = 0.0;
                for j in 0..k {
                    s += b[k - 1 - j] * (v[j + 1] - v[j]);
                }
                v[0] * c0 * (k as f64 * h).powf(-alpha) + c * s
            })
        }
        Scheme::GrunwaldLetnikov => {
            let w = gl_weights(alpha, len);
            let c = h.powf(-alpha);
            apply_by_component(f, side, |v, k| {
                if k == 0 {
                    return f64::NAN;
                }
                let mut s = 0.0;
                for j in 0..=k {
                    s += w[j] * v[k - j];
                }
                c * s
            })
        }
    };
    let (left, right) = match side {
        Side::Left => (true, f.is_singular_at(far)),
        Side::Right => (f.is_singular_at(far), true),
    };
    Ok(SampledFunction::from_raw(*f.grid(), f.dim(), values, left, right))
}

/// ₐD_t^α f by the L1 scheme. The value at t_0 is flagged singular.
/// α = 1 falls back to the classical derivative.
pub fn left_rl_derivative(f: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    rl_derivative(f, order, Scheme::L1, Side::Left)
}

/// ₜD_b^α f by the L1 scheme. The value at t_m is flagged singular.
/// α = 1 falls back to minus the classical derivative.
pub fn right_rl_derivative(f: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    rl_derivative(f, order, Scheme::L1, Side::Right)
}

pub fn left_rl_derivative_with(
    f: &SampledFunction,
    order: FracOrder,
    scheme: Scheme,
) -> Result<SampledFunction> {
    rl_derivative(f, order, scheme, Side::Left)
}

pub fn right_rl_derivative_with(
    f: &SampledFunction,
    order: FracOrder,
    scheme: Scheme,
) -> Result<SampledFunction> {
    rl_derivative(f, order, scheme, Side::Right)
}
