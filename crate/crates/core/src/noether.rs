//! Fractional Noether conservation laws.
//!
//! The operator D_t^γ(f, h) = −h·ₜD_b^γ f + f·ₐD_t^γ h plays the role of the
//! derivative of a product. For a functional invariant under
//! t̄ = t + ετ(t, q), q̄ = q + εξ(t, q), the expression
//!
//! ```text
//! D_t^α(F − α ∂₃F·ₐD_t^α q, τ) + D_t^α(∂₃F, ξ)
//! ```
//!
//! vanishes along extremals. With τ ≡ 0 it reduces to the momentum law
//! D_t^α(∂₃F, ξ) = 0. Conserved quantities are reported as residual fields:
//! for α < 1 a vanishing D_t^α expression does not make any scalar constant.

use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::frac_kernels::{left_rl_derivative, right_rl_derivative, FracOrder, Grid, SampledFunction};
use crate::problems::{
    augmented_lagrangian, fd_gradient, frac_velocity, sample_field, sample_partials, Multipliers, ResidualReport,
    ScalarField3, VariationalProblem,
};

pub type TauFn = dyn Fn(f64, &[f64]) -> f64 + Send + Sync;
pub type XiFn = dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync;

/// Infinitesimal generators (τ, ξ) of t̄ = t + ετ(t, q), q̄ = q + εξ(t, q).
#[derive(Clone)]
pub struct SymmetryGenerator {
    dim: usize,
    tau: Arc<TauFn>,
    xi: Arc<XiFn>,
}

impl fmt::Debug for SymmetryGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetryGenerator").field("dim", &self.dim).finish()
    }
}

impl SymmetryGenerator {
    pub fn new(
        dim: usize,
        tau: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
        xi: impl Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            tau: Arc::new(tau),
            xi: Arc::new(xi),
        }
    }

    /// Constant generators τ ≡ tau, ξ ≡ xi.
    pub fn constant(tau: f64, xi: Vec<f64>) -> Self {
        let dim = xi.len();
        Self::new(dim, move |_, _| tau, move |_, _, out| out.copy_from_slice(&xi))
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(0.0, vec![0.0; dim])
    }

    /// t̄ = t + ε, q̄ = q.
    pub fn time_translation(dim: usize) -> Self {
        Self::constant(1.0, vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self, t: f64, q: &[f64]) -> f64 {
        (self.tau)(t, q)
    }

    pub fn xi(&self, t: f64, q: &[f64], out: &mut [f64]) {
        (self.xi)(t, q, out)
    }

    /// τ(t, q(t)) as a sampled function of t.
    pub fn sample_tau(&self, q: &SampledFunction) -> SampledFunction {
        let grid = *q.grid();
        let values = (0..grid.len()).map(|i| self.tau(grid.node(i), q.at(i))).collect();
        SampledFunction::from_raw(grid, 1, values, false, false)
    }

    /// ξ(t, q(t)) as a sampled function of t.
    pub fn sample_xi(&self, q: &SampledFunction) -> SampledFunction {
        let grid = *q.grid();
        let mut values = vec![0.0; grid.len() * self.dim];
        for (i, out) in values.chunks_mut(self.dim).enumerate() {
            self.xi(grid.node(i), q.at(i), out);
        }
        SampledFunction::from_raw(grid, self.dim, values, false, false)
    }

    /// Probes τ and ξ for bounded first derivatives at random points.
    /// Returns the largest derivative magnitude seen.
    pub fn probe_smoothness(&self, probes: usize, seed: u64, t_range: (f64, f64), radius: f64) -> Result<f64> {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut grad = vec![0.0; self.dim + 1];
        for _ in 0..probes {
            let mut x = vec![rng.random_range(t_range.0..=t_range.1)];
            x.extend((0..self.dim).map(|_| rng.random_range(-radius..=radius)));
            fd_gradient(|p| self.tau(p[0], &p[1..]), &x, &mut grad);
            worst = grad.iter().fold(worst, |w, g| w.max(g.abs()));
            for c in 0..self.dim {
                fd_gradient(
                    |p| {
                        let mut xi = vec![0.0; self.dim];
                        self.xi(p[0], &p[1..], &mut xi);
                        xi[c]
                    },
                    &x,
                    &mut grad,
                );
                worst = grad.iter().fold(worst, |w, g| w.max(g.abs()));
            }
        }
        if !worst.is_finite() || worst > 1e8 {
            return Err(Error::Precondition(format!(
                "generator is not C1 on the probed box (derivative {worst:.3e})"
            )));
        }
        Ok(worst)
    }
}

/// D_t^γ(f, h) = −h·ₜD_b^γ f + f·ₐD_t^γ h. Vector arguments are paired
/// component-wise and summed.
pub fn frac_pair_operator(f: &SampledFunction, h: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    if f.grid() != h.grid() {
        return Err(Error::GridMismatch);
    }
    if f.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            what: "operator arguments",
            expected: f.dim(),
            found: h.dim(),
        });
    }
    let right = right_rl_derivative(f, order)?;
    let left = left_rl_derivative(h, order)?;
    let a = h.dot(&right)?;
    let b = f.dot(&left)?;
    b.lin_comb(1.0, &a, -1.0)
}

fn check_generator(problem: &VariationalProblem, gen: &SymmetryGenerator) -> Result<()> {
    if gen.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            what: "symmetry generator",
            expected: problem.dim(),
            found: gen.dim(),
        });
    }
    Ok(())
}

fn require_no_time_change(gen: &SymmetryGenerator, q: &SampledFunction) -> Result<()> {
    let tau = gen.sample_tau(q);
    if tau.values().iter().any(|t| t.abs() > 0.0) {
        return Err(Error::Precondition(
            "this law needs a generator with tau = 0; use noether_law_residual".into(),
        ));
    }
    Ok(())
}

struct Along {
    v: SampledFunction,
    f: SampledFunction,
    dq: SampledFunction,
    dv: SampledFunction,
}

fn along(problem: &VariationalProblem, mult: &Multipliers, q: &SampledFunction) -> Result<Along> {
    problem.check_trajectory(q)?;
    let field = augmented_lagrangian(problem, mult)?;
    let v = frac_velocity(q, problem.order())?;
    let f = sample_field(&field, q, &v)?;
    let (dq, dv) = sample_partials(&field, q, &v)?;
    Ok(Along { v, f, dq, dv })
}

/// ∂₂F·ξ + ∂₃F·ₐD_t^α[ξ(t, q(t))] for a generator with τ ≡ 0. Vanishes when
/// the augmented functional is invariant without time change.
pub fn invariance_necessary_condition(
    problem: &VariationalProblem,
    mult: &Multipliers,
    q: &SampledFunction,
    gen: &SymmetryGenerator,
) -> Result<ResidualReport> {
    check_generator(problem, gen)?;
    require_no_time_change(gen, q)?;
    let a = along(problem, mult, q)?;
    let xi = gen.sample_xi(q);
    let dxi = left_rl_derivative(&xi, problem.order())?;
    let r = a.dq.dot(&xi)?.lin_comb(1.0, &a.dv.dot(&dxi)?, 1.0)?;
    Ok(ResidualReport::new(r, problem.band()))
}

/// D_t^α(∂₃F, ξ): the fractional momentum law for τ ≡ 0.
pub fn momentum_law_residual(
    problem: &VariationalProblem,
    mult: &Multipliers,
    q: &SampledFunction,
    gen: &SymmetryGenerator,
) -> Result<ResidualReport> {
    check_generator(problem, gen)?;
    require_no_time_change(gen, q)?;
    let a = along(problem, mult, q)?;
    let xi = gen.sample_xi(q);
    let r = frac_pair_operator(&a.dv, &xi, problem.order())?;
    Ok(ResidualReport::new(r, problem.band()))
}

/// D_t^α(F − α ∂₃F·ₐD_t^α q, τ) + D_t^α(∂₃F, ξ).
pub fn noether_law_residual(
    problem: &VariationalProblem,
    mult: &Multipliers,
    q: &SampledFunction,
    gen: &SymmetryGenerator,
) -> Result<ResidualReport> {
    check_generator(problem, gen)?;
    let alpha = problem.order().alpha();
    let a = along(problem, mult, q)?;
    let xi = gen.sample_xi(q);
    let tau = gen.sample_tau(q);
    let energy = a.f.lin_comb(1.0, &a.dv.dot(&a.v)?, -alpha)?;
    let momentum = frac_pair_operator(&a.dv, &xi, problem.order())?;
    let r = if tau.values().iter().all(|&t| t == 0.0) {
        momentum
    } else {
        frac_pair_operator(&energy, &tau, problem.order())?.lin_comb(1.0, &momentum, 1.0)?
    };
    Ok(ResidualReport::new(r, problem.band()))
}

/// Perturbation sizes for the invariance probe; the two central
/// differences are Richardson-combined.
pub const INVARIANCE_EPS: f64 = 1e-4;

pub type ProbeIntegrand<'a> = dyn Fn(f64, &[f64], &[f64]) -> f64 + Sync + 'a;
pub type ProbeGenerator<'a> = dyn Fn(f64, &[f64], &mut [f64]) + Sync + 'a;

/// Everything the first-order invariance probe needs. The state `z` is
/// transported as a whole; only its first `n_diff` components are
/// fractionally differentiated and passed to the integrand as velocities.
pub struct InvarianceProbe<'a> {
    pub order: FracOrder,
    pub z: &'a SampledFunction,
    pub n_diff: usize,
    pub integrand: &'a ProbeIntegrand<'a>,
    pub tau: &'a (dyn Fn(f64, &[f64]) -> f64 + Sync),
    pub xi: &'a ProbeGenerator<'a>,
}

impl InvarianceProbe<'_> {
    /// ∫ over [t̄(a), t̄(t_k)] of the transformed integrand, for every k.
    fn cumulative_action(&self, eps: f64) -> Result<Vec<f64>> {
        let grid = *self.z.grid();
        let dim = self.z.dim();
        let len = grid.len();
        let mut times = Vec::with_capacity(len);
        let mut states = vec![0.0; len * dim];
        let mut xi = vec![0.0; dim];
        for i in 0..len {
            let t = grid.node(i);
            let z = self.z.at(i);
            times.push(t + eps * (self.tau)(t, z));
            (self.xi)(t, z, &mut xi);
            for c in 0..dim {
                states[i * dim + c] = z[c] + eps * xi[c];
            }
        }
        if let Some(i) = times.windows(2).position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::Resampling(format!(
                "time map is not increasing near node {i} for eps = {eps}"
            )));
        }

        let moved = Grid::new(times[0], times[len - 1], grid.m())?;
        let mut resampled = vec![0.0; len * dim];
        let mut seg = 0;
        for j in 0..len {
            let s = moved.node(j);
            while seg + 2 < len && times[seg + 1] < s {
                seg += 1;
            }
            let w = ((s - times[seg]) / (times[seg + 1] - times[seg])).clamp(0.0, 1.0);
            for c in 0..dim {
                resampled[j * dim + c] = (1.0 - w) * states[seg * dim + c] + w * states[(seg + 1) * dim + c];
            }
        }
        let zbar = SampledFunction::new(moved, dim, resampled)?;
        let qbar = SampledFunction::from_components(&zbar.components()[..self.n_diff])?;
        let vbar = left_rl_derivative(&qbar, self.order)?.fill_singular();
        let values = (0..len)
            .map(|j| (self.integrand)(moved.node(j), zbar.at(j), vbar.at(j)))
            .collect();
        let running = SampledFunction::new(moved, 1, values)
            .map_err(|e| Error::Resampling(format!("transformed integrand: {e}")))?
            .cumulative_trapezoid();

        // read the running integral back at the transformed original nodes
        let h = moved.h();
        Ok(times
            .iter()
            .map(|&t| {
                let x = ((t - moved.a()) / h).clamp(0.0, moved.m() as f64);
                let j = (x.floor() as usize).min(moved.m() - 1);
                let w = x - j as f64;
                (1.0 - w) * running[j] + w * running[j + 1]
            })
            .collect())
    }

    fn derivative(&self, eps: f64) -> Result<Vec<f64>> {
        let up = self.cumulative_action(eps)?;
        let down = self.cumulative_action(-eps)?;
        Ok(up.iter().zip(&down).map(|(u, d)| (u - d) / (2.0 * eps)).collect())
    }

    /// Richardson-combined d/dε at ε = 0 of the cumulative action, per node.
    pub fn run(&self) -> Result<SampledFunction> {
        let coarse = self.derivative(INVARIANCE_EPS)?;
        let fine = self.derivative(0.5 * INVARIANCE_EPS)?;
        let values = fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
        SampledFunction::new(*self.z.grid(), 1, values)
    }
}

/// First-order invariance of ∫ field(t, q, ₐD_t^α q) dt under the generator,
/// over the nested subintervals [a, t_k]. The report has no excluded band.
pub fn field_invariance_check(
    field: &ScalarField3,
    order: FracOrder,
    q: &SampledFunction,
    gen: &SymmetryGenerator,
) -> Result<ResidualReport> {
    if gen.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            what: "symmetry generator",
            expected: q.dim(),
            found: gen.dim(),
        });
    }
    let integrand = |t: f64, z: &[f64], v: &[f64]| field.eval(t, z, v);
    let tau = |t: f64, z: &[f64]| gen.tau(t, z);
    let xi = |t: f64, z: &[f64], out: &mut [f64]| gen.xi(t, z, out);
    let probe = InvarianceProbe {
        order,
        z: q,
        n_diff: q.dim(),
        integrand: &integrand,
        tau: &tau,
        xi: &xi,
    };
    Ok(ResidualReport::new(probe.run()?, 0))
}

/// First-order invariance of the augmented functional ∫ F dt.
pub fn invariance_first_order_check(
    problem: &VariationalProblem,
    mult: &Multipliers,
    q: &SampledFunction,
    gen: &SymmetryGenerator,
) -> Result<ResidualReport> {
    problem.check_trajectory(q)?;
    let field = augmented_lagrangian(problem, mult)?;
    field_invariance_check(&field, problem.order(), q, gen)
}
