use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

pub type ValueFn = dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync;
pub type GradFn = dyn Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync;

/// Relative step for central-difference partials: h = FD_STEP·(1 + |x|).
pub const FD_STEP: f64 = 1e-6;

/// A scalar function f(t, x, y) of time and two vector arguments, with
/// optional analytic gradients in x (∂₂) and y (∂₃). Missing gradients are
/// formed by central differences.
///
/// In the variational setting x = q and y = ₐD_t^α q; in the control setting
/// x = q and y = u.
#[derive(Clone)]
pub struct ScalarField3 {
    dim_x: usize,
    dim_y: usize,
    value: Arc<ValueFn>,
    grad_x: Option<Arc<GradFn>>,
    grad_y: Option<Arc<GradFn>>,
}

impl fmt::Debug for ScalarField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField3")
            .field("dim_x", &self.dim_x)
            .field("dim_y", &self.dim_y)
            .field("analytic_partials", &self.has_analytic_partials())
            .finish()
    }
}

/// Central-difference gradient of `f` at `x`.
pub(crate) fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], out: &mut [f64]) {
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let step = FD_STEP * (1.0 + x[i].abs());
        probe[i] = x[i] + step;
        let up = f(&probe);
        probe[i] = x[i] - step;
        let down = f(&probe);
        probe[i] = x[i];
        out[i] = (up - down) / (2.0 * step);
    }
}

impl ScalarField3 {
    pub fn new(
        dim_x: usize,
        dim_y: usize,
        value: impl Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim_x,
            dim_y,
            value: Arc::new(value),
            grad_x: None,
            grad_y: None,
        }
    }

    pub fn with_partials(
        mut self,
        grad_x: impl Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        grad_y: impl Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        self.grad_x = Some(Arc::new(grad_x));
        self.grad_y = Some(Arc::new(grad_y));
        self
    }

    pub fn zero(dim_x: usize, dim_y: usize) -> Self {
        Self::constant(dim_x, dim_y, 0.0)
    }

    pub fn constant(dim_x: usize, dim_y: usize, c: f64) -> Self {
        Self::new(dim_x, dim_y, move |_, _, _| c).with_partials(
            |_, _, _, out| out.fill(0.0),
            |_, _, _, out| out.fill(0.0),
        )
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_y(&self) -> usize {
        self.dim_y
    }

    pub fn has_analytic_partials(&self) -> bool {
        self.grad_x.is_some() && self.grad_y.is_some()
    }

    pub fn eval(&self, t: f64, x: &[f64], y: &[f64]) -> f64 {
        (self.value)(t, x, y)
    }

    /// ∂₂f: gradient in the first vector argument.
    pub fn grad_x(&self, t: f64, x: &[f64], y: &[f64], out: &mut [f64]) {
        match &self.grad_x {
            Some(g) => g(t, x, y, out),
            None => fd_gradient(|xp| self.eval(t, xp, y), x, out),
        }
    }

    /// ∂₃f: gradient in the second vector argument.
    pub fn grad_y(&self, t: f64, x: &[f64], y: &[f64], out: &mut [f64]) {
        match &self.grad_y {
            Some(g) => g(t, x, y, out),
            None => fd_gradient(|yp| self.eval(t, x, yp), y, out),
        }
    }

    /// Σ c_i f_i. Partials are analytic when every term's are.
    pub fn linear_combination(terms: &[(f64, ScalarField3)]) -> Result<ScalarField3> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::Precondition("empty linear combination".into()))?;
        let (dx, dy) = (first.dim_x, first.dim_y);
        for (_, f) in terms {
            if f.dim_x != dx || f.dim_y != dy {
                return Err(Error::DimensionMismatch {
                    what: "field arguments",
                    expected: dx,
                    found: f.dim_x.max(f.dim_y),
                });
            }
        }
        let terms: Arc<Vec<(f64, ScalarField3)>> = Arc::new(terms.to_vec());
        let tv = terms.clone();
        let mut out = ScalarField3::new(dx, dy, move |t, x, y| {
            tv.iter().map(|(c, f)| c * f.eval(t, x, y)).sum()
        });
        if terms.iter().all(|(_, f)| f.has_analytic_partials()) {
            let tx = terms.clone();
            let ty = terms;
            out = out.with_partials(
                move |t, x, y, g| {
                    g.fill(0.0);
                    let mut buf = vec![0.0; g.len()];
                    for (c, f) in tx.iter() {
                        f.grad_x(t, x, y, &mut buf);
                        g.iter_mut().zip(&buf).for_each(|(a, b)| *a += c * b);
                    }
                },
                move |t, x, y, g| {
                    g.fill(0.0);
                    let mut buf = vec![0.0; g.len()];
                    for (c, f) in ty.iter() {
                        f.grad_y(t, x, y, &mut buf);
                        g.iter_mut().zip(&buf).for_each(|(a, b)| *a += c * b);
                    }
                },
            );
        }
        Ok(out)
    }

    /// Compares analytic partials against central differences at `probes`
    /// random points of [t0, t1] × [−radius, radius]^(dx+dy). Returns the
    /// largest scaled discrepancy |analytic − fd| / (1 + |analytic|); fails
    /// if it exceeds 1e−6. Fields without analytic partials pass trivially.
    pub fn check_partials(&self, probes: usize, seed: u64, t_range: (f64, f64), radius: f64) -> Result<f64> {
        let (Some(gx), Some(gy)) = (&self.grad_x, &self.grad_y) else {
            return Ok(0.0);
        };
        let mut rng = StdRng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut a = vec![0.0; self.dim_x.max(self.dim_y)];
        let mut n = vec![0.0; self.dim_x.max(self.dim_y)];
        for _ in 0..probes {
            let t = rng.random_range(t_range.0..=t_range.1);
            let x: Vec<f64> = (0..self.dim_x).map(|_| rng.random_range(-radius..=radius)).collect();
            let y: Vec<f64> = (0..self.dim_y).map(|_| rng.random_range(-radius..=radius)).collect();

            gx(t, &x, &y, &mut a[..self.dim_x]);
            fd_gradient(|xp| self.eval(t, xp, &y), &x, &mut n[..self.dim_x]);
            for i in 0..self.dim_x {
                worst = worst.max((a[i] - n[i]).abs() / (1.0 + a[i].abs()));
            }
            gy(t, &x, &y, &mut a[..self.dim_y]);
            fd_gradient(|yp| self.eval(t, &x, yp), &y, &mut n[..self.dim_y]);
            for i in 0..self.dim_y {
                worst = worst.max((a[i] - n[i]).abs() / (1.0 + a[i].abs()));
            }
        }
        if worst > 1e-6 || worst.is_nan() {
            return Err(Error::Precondition(format!(
                "analytic partials disagree with finite differences (scaled error {worst:.3e})"
            )));
        }
        Ok(worst)
    }
}
