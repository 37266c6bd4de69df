use crate::error::{Error, Result};

use super::gamma::{gamma, recip_gamma};
use super::grid::{FracOrder, Grid};
use super::sampled::SampledFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomKind {
    Constant(f64),
    /// coefficient · (t − a)^exponent
    PowerShifted { coefficient: f64, exponent: f64 },
}

/// A function with a closed-form left RL derivative, anchored at base point `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormAtom {
    kind: AtomKind,
    a: f64,
}

impl ClosedFormAtom {
    pub fn constant(c: f64, a: f64) -> Self {
        Self {
            kind: AtomKind::Constant(c),
            a,
        }
    }

    pub fn power(coefficient: f64, exponent: f64, a: f64) -> Result<Self> {
        if exponent.is_nan() || exponent <= -1.0 {
            return Err(Error::InvalidExponent(exponent));
        }
        Ok(Self {
            kind: AtomKind::PowerShifted {
                coefficient,
                exponent,
            },
            a,
        })
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    pub fn base(&self) -> f64 {
        self.a
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            AtomKind::Constant(c) => c,
            AtomKind::PowerShifted {
                coefficient,
                exponent,
            } => coefficient * (t - self.a).powf(exponent),
        }
    }

    pub fn sample(&self, grid: Grid) -> SampledFunction {
        SampledFunction::from_fn(grid, |t| self.eval(t))
    }
}

/// Exact ₐD_t^α of a closed-form atom at `t`.
///
/// Constant: c (t−a)^{−α} / Γ(1−α), which is 0 for integer α.
/// Power: coefficient · Γ(υ+1)/Γ(υ−α+1) · (t−a)^{υ−α}.
pub fn closed_form_left_derivative(atom: &ClosedFormAtom, order: FracOrder, t: f64) -> Result<f64> {
    let alpha = order.alpha();
    let s = t - atom.a;
    match atom.kind {
        AtomKind::Constant(c) => {
            if order.is_integer() {
                return Ok(0.0);
            }
            if s <= 0.0 {
                return Err(Error::Domain { t, a: atom.a });
            }
            Ok(c * recip_gamma(1.0 - alpha) * s.powf(-alpha))
        }
        AtomKind::PowerShifted {
            coefficient,
            exponent,
        } => {
            let shifted = exponent - alpha + 1.0;
            if shifted <= 0.0 && shifted.fract() == 0.0 {
                return Err(Error::Pole(shifted));
            }
            let p = exponent - alpha;
            if s < 0.0 || (s == 0.0 && p < 0.0) {
                return Err(Error::Domain { t, a: atom.a });
            }
            Ok(coefficient * gamma(exponent + 1.0)? / gamma(shifted)? * s.powf(p))
        }
    }
}
