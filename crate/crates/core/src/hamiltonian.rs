//! Fractional isoperimetric optimal control in Hamiltonian form.
//!
//! Problem: minimize ∫ L(t, q, u) dt subject to ₐD_t^α q = φ(t, q, u),
//! ∫ g_j(t, q, u) dt = l_j and q(a) = q_a, with Hamiltonian
//! H = L − λ·g + p·φ. A quadruple (q, u, p, λ) is a Pontryagin extremal when
//!
//! ```text
//! ₐD_t^α q = ∂₄H,   ₜD_b^α p = ∂₂H,   ∂₃H = 0.
//! ```
//!
//! This module certifies or refutes candidate quadruples and evaluates the
//! Hamiltonian-form conservation laws along them; it does not synthesize
//! controls.

use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::frac_kernels::{left_rl_derivative, right_rl_derivative, FracOrder, Grid, SampledFunction};
use crate::noether::{frac_pair_operator, InvarianceProbe};
use crate::problems::{
    augmented_lagrangian, fd_gradient, frac_velocity, sample_partials, Multipliers, ResidualReport, ScalarField3,
    VariationalProblem, DEFAULT_BAND,
};

pub type VectorFn = dyn Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync;

/// A vector-valued map (t, x, y) ↦ R^dim_out.
#[derive(Clone)]
pub struct VectorField3 {
    dim_x: usize,
    dim_y: usize,
    dim_out: usize,
    f: Arc<VectorFn>,
}

impl fmt::Debug for VectorField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField3")
            .field("dim_x", &self.dim_x)
            .field("dim_y", &self.dim_y)
            .field("dim_out", &self.dim_out)
            .finish()
    }
}

impl VectorField3 {
    pub fn new(
        dim_x: usize,
        dim_y: usize,
        dim_out: usize,
        f: impl Fn(f64, &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim_x,
            dim_y,
            dim_out,
            f: Arc::new(f),
        }
    }

    /// φ(t, q, u) = u.
    pub fn control_identity(n: usize) -> Self {
        Self::new(n, n, n, |_, _, u, out| out.copy_from_slice(u))
    }

    pub fn eval(&self, t: f64, x: &[f64], y: &[f64], out: &mut [f64]) {
        (self.f)(t, x, y, out)
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }
}

/// Data of the fractional isoperimetric optimal control problem.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    order: FracOrder,
    grid: Grid,
    lagrangian: ScalarField3,
    dynamics: VectorField3,
    constraints: Vec<ScalarField3>,
    levels: Vec<f64>,
    initial: Vec<f64>,
    band: usize,
}

impl ControlProblem {
    pub fn new(
        order: FracOrder,
        grid: Grid,
        lagrangian: ScalarField3,
        dynamics: VectorField3,
        initial: Vec<f64>,
    ) -> Result<Self> {
        if order.alpha() > 1.0 {
            return Err(Error::UnsupportedOrder(order.alpha()));
        }
        let n = initial.len();
        if dynamics.dim_x != n || dynamics.dim_out != n || lagrangian.dim_x() != n {
            return Err(Error::DimensionMismatch {
                what: "state",
                expected: n,
                found: dynamics.dim_out,
            });
        }
        if lagrangian.dim_y() != dynamics.dim_y {
            return Err(Error::DimensionMismatch {
                what: "control",
                expected: dynamics.dim_y,
                found: lagrangian.dim_y(),
            });
        }
        Ok(Self {
            order,
            grid,
            lagrangian,
            dynamics,
            constraints: Vec::new(),
            levels: Vec::new(),
            initial,
            band: DEFAULT_BAND,
        })
    }

    pub fn with_constraint(mut self, g: ScalarField3, level: f64) -> Result<Self> {
        if g.dim_x() != self.n() || g.dim_y() != self.m_ctrl() {
            return Err(Error::DimensionMismatch {
                what: "constraint arguments",
                expected: self.n(),
                found: g.dim_x(),
            });
        }
        self.constraints.push(g);
        self.levels.push(level);
        Ok(self)
    }

    pub fn with_band(mut self, band: usize) -> Self {
        self.band = band;
        self
    }

    /// The variational problem seen as a control problem with φ = u.
    pub fn from_variational(problem: &VariationalProblem) -> Result<Self> {
        let n = problem.dim();
        let mut cp = Self::new(
            problem.order(),
            *problem.grid(),
            problem.lagrangian().clone(),
            VectorField3::control_identity(n),
            problem.left().to_vec(),
        )?
        .with_band(problem.band());
        for (g, l) in problem.constraints().iter().zip(problem.levels()) {
            cp = cp.with_constraint(g.clone(), *l)?;
        }
        Ok(cp)
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.initial.len()
    }

    pub fn m_ctrl(&self) -> usize {
        self.dynamics.dim_y
    }

    pub fn k(&self) -> usize {
        self.constraints.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn band(&self) -> usize {
        self.band
    }

    fn check_point(&self, q: &[f64], u: &[f64], p: &[f64], lambda: &[f64]) -> Result<()> {
        for (what, expected, found) in [
            ("state", self.n(), q.len()),
            ("control", self.m_ctrl(), u.len()),
            ("costate", self.n(), p.len()),
            ("multipliers", self.k(), lambda.len()),
        ] {
            if expected != found {
                return Err(Error::DimensionMismatch { what, expected, found });
            }
        }
        Ok(())
    }

    fn hamiltonian(&self, t: f64, q: &[f64], u: &[f64], p: &[f64], lambda: &[f64]) -> f64 {
        let mut phi = vec![0.0; self.n()];
        self.dynamics.eval(t, q, u, &mut phi);
        let constraint: f64 = lambda
            .iter()
            .zip(&self.constraints)
            .map(|(l, g)| l * g.eval(t, q, u))
            .sum();
        let drift: f64 = p.iter().zip(&phi).map(|(a, b)| a * b).sum();
        self.lagrangian.eval(t, q, u) - constraint + drift
    }

    /// (∂₂H, ∂₃H) at one point. L and g use their own partials; p·φ is
    /// differentiated by central differences.
    #[allow(clippy::too_many_arguments)]
    fn hamiltonian_partials(
        &self,
        t: f64,
        q: &[f64],
        u: &[f64],
        p: &[f64],
        lambda: &[f64],
        dq: &mut [f64],
        du: &mut [f64],
    ) {
        let n = self.n();
        let mc = self.m_ctrl();
        let drift_q = |x: &[f64]| {
            let mut out = vec![0.0; n];
            self.dynamics.eval(t, x, u, &mut out);
            p.iter().zip(&out).map(|(a, b)| a * b).sum::<f64>()
        };
        self.lagrangian.grad_x(t, q, u, dq);
        self.lagrangian.grad_y(t, q, u, du);
        let mut bq = vec![0.0; n];
        let mut bu = vec![0.0; mc];
        for (l, g) in lambda.iter().zip(&self.constraints) {
            g.grad_x(t, q, u, &mut bq);
            g.grad_y(t, q, u, &mut bu);
            dq.iter_mut().zip(&bq).for_each(|(a, b)| *a -= l * b);
            du.iter_mut().zip(&bu).for_each(|(a, b)| *a -= l * b);
        }
        fd_gradient(drift_q, q, &mut bq);
        dq.iter_mut().zip(&bq).for_each(|(a, b)| *a += b);
        let drift_u = |y: &[f64]| {
            let mut out = vec![0.0; n];
            self.dynamics.eval(t, q, y, &mut out);
            p.iter().zip(&out).map(|(a, b)| a * b).sum::<f64>()
        };
        fd_gradient(drift_u, u, &mut bu);
        du.iter_mut().zip(&bu).for_each(|(a, b)| *a += b);
    }

    /// Random-probe check that L, φ and every g_j ignore t.
    pub fn is_autonomous(&self, probes: usize, seed: u64) -> bool {
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b) = (self.grid.a(), self.grid.b());
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
        let mut f1 = vec![0.0; self.n()];
        let mut f2 = vec![0.0; self.n()];
        for _ in 0..probes {
            let t1 = rng.random_range(a..=b);
            let t2 = rng.random_range(a..=b);
            let q: Vec<f64> = (0..self.n()).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let u: Vec<f64> = (0..self.m_ctrl()).map(|_| rng.random_range(-1.0..=1.0)).collect();
            if !close(self.lagrangian.eval(t1, &q, &u), self.lagrangian.eval(t2, &q, &u)) {
                return false;
            }
            if self
                .constraints
                .iter()
                .any(|g| !close(g.eval(t1, &q, &u), g.eval(t2, &q, &u)))
            {
                return false;
            }
            self.dynamics.eval(t1, &q, &u, &mut f1);
            self.dynamics.eval(t2, &q, &u, &mut f2);
            if f1.iter().zip(&f2).any(|(x, y)| !close(*x, *y)) {
                return false;
            }
        }
        true
    }
}

/// Candidate quadruple (q, u, p, λ).
#[derive(Debug, Clone, PartialEq)]
pub struct PontryaginExtremal {
    pub q: SampledFunction,
    pub u: SampledFunction,
    pub p: SampledFunction,
    pub lambda: Multipliers,
}

impl PontryaginExtremal {
    pub fn new(q: SampledFunction, u: SampledFunction, p: SampledFunction, lambda: Multipliers) -> Result<Self> {
        if q.grid() != u.grid() || q.grid() != p.grid() {
            return Err(Error::GridMismatch);
        }
        if q.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                what: "costate",
                expected: q.dim(),
                found: p.dim(),
            });
        }
        Ok(Self { q, u, p, lambda })
    }

    /// Lifts a variational trajectory: u = ₐD_t^α q (endpoint extrapolated)
    /// and the stationary costate p = −∂₃L + λ·∂₃g.
    pub fn lift(problem: &VariationalProblem, mult: &Multipliers, q: &SampledFunction) -> Result<Self> {
        problem.check_trajectory(q)?;
        let u = frac_velocity(q, problem.order())?.fill_singular();
        let f = augmented_lagrangian(problem, mult)?;
        let (_, dv) = sample_partials(&f, q, &u)?;
        Self::new(q.clone(), u, dv.scale(-1.0), mult.clone())
    }

    fn check(&self, cp: &ControlProblem) -> Result<()> {
        if *self.q.grid() != cp.grid {
            return Err(Error::GridMismatch);
        }
        if self.u.dim() != cp.m_ctrl() || self.q.dim() != cp.n() || self.lambda.len() != cp.k() {
            return Err(Error::DimensionMismatch {
                what: "extremal",
                expected: cp.n(),
                found: self.q.dim(),
            });
        }
        Ok(())
    }
}

type ScalarGen = dyn Fn(f64, &[f64], &[f64], &[f64]) -> f64 + Send + Sync;
type VectorGen = dyn Fn(f64, &[f64], &[f64], &[f64], &mut [f64]) + Send + Sync;

/// Generators (τ, ξ, ϱ, ς) of t̄ = t + ετ, q̄ = q + εξ, ū = u + εϱ, p̄ = p + ες,
/// each a function of (t, q, u, p).
#[derive(Clone)]
pub struct ControlSymmetry {
    n: usize,
    m: usize,
    tau: Arc<ScalarGen>,
    xi: Arc<VectorGen>,
    rho: Arc<VectorGen>,
    sigma: Arc<VectorGen>,
}

impl fmt::Debug for ControlSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlSymmetry").field("n", &self.n).field("m", &self.m).finish()
    }
}

impl ControlSymmetry {
    pub fn new(
        n: usize,
        m: usize,
        tau: impl Fn(f64, &[f64], &[f64], &[f64]) -> f64 + Send + Sync + 'static,
        xi: impl Fn(f64, &[f64], &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        rho: impl Fn(f64, &[f64], &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
        sigma: impl Fn(f64, &[f64], &[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            m,
            tau: Arc::new(tau),
            xi: Arc::new(xi),
            rho: Arc::new(rho),
            sigma: Arc::new(sigma),
        }
    }

    pub fn constant(tau: f64, xi: Vec<f64>, rho: Vec<f64>, sigma: Vec<f64>) -> Self {
        let (n, m) = (xi.len(), rho.len());
        Self::new(
            n,
            m,
            move |_, _, _, _| tau,
            move |_, _, _, _, out| out.copy_from_slice(&xi),
            move |_, _, _, _, out| out.copy_from_slice(&rho),
            move |_, _, _, _, out| out.copy_from_slice(&sigma),
        )
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Self::constant(0.0, vec![0.0; n], vec![0.0; m], vec![0.0; n])
    }

    /// τ = 1, ξ = ϱ = ς = 0.
    pub fn time_translation(n: usize, m: usize) -> Self {
        Self::constant(1.0, vec![0.0; n], vec![0.0; m], vec![0.0; n])
    }
}

/// H = L − λ·g + p·φ at one point.
pub fn hamiltonian_value(
    cp: &ControlProblem,
    t: f64,
    q: &[f64],
    u: &[f64],
    p: &[f64],
    lambda: &Multipliers,
) -> Result<f64> {
    cp.check_point(q, u, p, lambda.as_slice())?;
    Ok(cp.hamiltonian(t, q, u, p, lambda.as_slice()))
}

/// H along the extremal, as a sampled function.
pub fn sample_hamiltonian(cp: &ControlProblem, ext: &PontryaginExtremal) -> Result<SampledFunction> {
    ext.check(cp)?;
    let grid = cp.grid;
    let values = (0..grid.len())
        .map(|i| cp.hamiltonian(grid.node(i), ext.q.at(i), ext.u.at(i), ext.p.at(i), ext.lambda.as_slice()))
        .collect();
    SampledFunction::new(grid, 1, values)
}

/// Residuals of the Hamiltonian system and the stationary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct PontryaginResiduals {
    /// ₐD_t^α q − ∂₄H
    pub state: ResidualReport,
    /// ₜD_b^α p − ∂₂H
    pub costate: ResidualReport,
    /// ∂₃H
    pub stationary: ResidualReport,
}

impl PontryaginResiduals {
    pub fn certified(&self, tolerance: f64) -> bool {
        self.state.passes(tolerance) && self.costate.passes(tolerance) && self.stationary.passes(tolerance)
    }
}

pub fn pontryagin_residuals(cp: &ControlProblem, ext: &PontryaginExtremal) -> Result<PontryaginResiduals> {
    ext.check(cp)?;
    for (x, y) in ext.q.at(0).iter().zip(&cp.initial) {
        if (x - y).abs() > 1e-6 * (1.0 + y.abs()) {
            return Err(Error::Precondition(format!("q(a) = {x} differs from q_a = {y}")));
        }
    }
    let grid = cp.grid;
    let (n, mc) = (cp.n(), cp.m_ctrl());
    let lambda = ext.lambda.as_slice();
    let vq = left_rl_derivative(&ext.q, cp.order)?;
    let dp = right_rl_derivative(&ext.p, cp.order)?;

    let mut state = vec![0.0; grid.len() * n];
    let mut costate = vec![0.0; grid.len() * n];
    let mut stationary = vec![0.0; grid.len() * mc];
    let mut phi = vec![0.0; n];
    let mut hq = vec![0.0; n];
    let mut hu = vec![0.0; mc];
    for i in 0..grid.len() {
        let t = grid.node(i);
        let (q, u, p) = (ext.q.at(i), ext.u.at(i), ext.p.at(i));
        // ∂₄H = φ exactly
        cp.dynamics.eval(t, q, u, &mut phi);
        cp.hamiltonian_partials(t, q, u, p, lambda, &mut hq, &mut hu);
        for c in 0..n {
            state[i * n + c] = vq.at(i)[c] - phi[c];
            costate[i * n + c] = dp.at(i)[c] - hq[c];
        }
        stationary[i * mc..(i + 1) * mc].copy_from_slice(&hu);
    }
    let m = grid.m();
    let mk = |values, dim, l, r| ResidualReport::new(SampledFunction::from_raw(grid, dim, values, l, r), cp.band);
    Ok(PontryaginResiduals {
        state: mk(state, n, true, vq.is_singular_node(m)),
        costate: mk(costate, n, dp.is_singular_node(0), true),
        stationary: mk(stationary, mc, false, false),
    })
}

/// H − (1−α)·p·ₐD_t^α q along the extremal; ₐD_t^α q at t_0 is extrapolated
/// when `fill` is set.
fn energy_term(cp: &ControlProblem, ext: &PontryaginExtremal, fill: bool) -> Result<SampledFunction> {
    let alpha = cp.order.alpha();
    let h = sample_hamiltonian(cp, ext)?;
    let mut vq = left_rl_derivative(&ext.q, cp.order)?;
    if fill {
        vq = vq.fill_singular();
    }
    h.lin_comb(1.0, &ext.p.dot(&vq)?, -(1.0 - alpha))
}

/// D_t^α(H − (1−α) p·ₐD_t^α q, τ) − D_t^α(p, ξ).
pub fn hamiltonian_noether_residual(
    cp: &ControlProblem,
    ext: &PontryaginExtremal,
    sym: &ControlSymmetry,
) -> Result<ResidualReport> {
    ext.check(cp)?;
    if sym.n != cp.n() || sym.m != cp.m_ctrl() {
        return Err(Error::DimensionMismatch {
            what: "control symmetry",
            expected: cp.n(),
            found: sym.n,
        });
    }
    let grid = cp.grid;
    let n = cp.n();
    let tau_values: Vec<f64> = (0..grid.len())
        .map(|i| (sym.tau)(grid.node(i), ext.q.at(i), ext.u.at(i), ext.p.at(i)))
        .collect();
    let mut xi_values = vec![0.0; grid.len() * n];
    for (i, out) in xi_values.chunks_mut(n).enumerate() {
        (sym.xi)(grid.node(i), ext.q.at(i), ext.u.at(i), ext.p.at(i), out);
    }
    let tau = SampledFunction::new(grid, 1, tau_values)?;
    let xi = SampledFunction::new(grid, n, xi_values)?;
    let momentum = frac_pair_operator(&ext.p, &xi, cp.order)?.scale(-1.0);
    let r = if tau.values().iter().all(|&t| t == 0.0) {
        momentum
    } else {
        let energy = energy_term(cp, ext, false)?;
        frac_pair_operator(&energy, &tau, cp.order)?.lin_comb(1.0, &momentum, 1.0)?
    };
    Ok(ResidualReport::new(r, cp.band))
}

/// ₐD_t^α[H + (α−1)·p·ₐD_t^α q] for an autonomous problem.
pub fn autonomous_energy_residual(cp: &ControlProblem, ext: &PontryaginExtremal) -> Result<ResidualReport> {
    if !cp.is_autonomous(32, 0x5eed) {
        return Err(Error::NotAutonomous("L, phi or g depends explicitly on t".into()));
    }
    let term = energy_term(cp, ext, true)?;
    let r = left_rl_derivative(&term, cp.order)?;
    Ok(ResidualReport::new(r, cp.band))
}

/// First-order invariance of ∫ [H − p·ₐD_t^α q] dt under a control symmetry,
/// over nested subintervals [a, t_k].
pub fn control_invariance_first_order_check(
    cp: &ControlProblem,
    ext: &PontryaginExtremal,
    sym: &ControlSymmetry,
) -> Result<ResidualReport> {
    ext.check(cp)?;
    let (n, mc) = (cp.n(), cp.m_ctrl());
    let z = SampledFunction::from_components(&[ext.q.clone(), ext.u.clone(), ext.p.clone()])?;
    let lambda = ext.lambda.as_slice().to_vec();
    let split = |z: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (z[..n].to_vec(), z[n..n + mc].to_vec(), z[n + mc..].to_vec())
    };
    let integrand = |t: f64, z: &[f64], v: &[f64]| {
        let (q, u, p) = split(z);
        let pv: f64 = p.iter().zip(v).map(|(a, b)| a * b).sum();
        cp.hamiltonian(t, &q, &u, &p, &lambda) - pv
    };
    let tau = |t: f64, z: &[f64]| {
        let (q, u, p) = split(z);
        (sym.tau)(t, &q, &u, &p)
    };
    let xi = |t: f64, z: &[f64], out: &mut [f64]| {
        let (q, u, p) = split(z);
        (sym.xi)(t, &q, &u, &p, &mut out[..n]);
        (sym.rho)(t, &q, &u, &p, &mut out[n..n + mc]);
        (sym.sigma)(t, &q, &u, &p, &mut out[n + mc..]);
    };
    let probe = InvarianceProbe {
        order: cp.order,
        z: &z,
        n_diff: n,
        integrand: &integrand,
        tau: &tau,
        xi: &xi,
    };
    Ok(ResidualReport::new(probe.run()?, 0))
}
