//! Discretization of the isoperimetric problem.
//!
//! Integrals are J_h(q) = Σ_r w_r F(s_r, (Pq)_r, (Vq)_r) with F = L − λ·g.
//! The unknowns are the interior node values together with λ, and the
//! system is
//!
//! ```text
//! [T_xᵀ(d ∘ ∂₂F) + T_yᵀ(d ∘ ∂₃F)]_j = 0,   j = 1..m−1,
//! Σ_r w_r g_j(s_r, (Pq)_r, (Vq)_r) − l_j = 0.
//! ```
//!
//! For 0 < α < 1 the samples are the nodes, P = I, V is the L1 matrix (row 0
//! extrapolated), w are trapezoid weights, and the Euler–Lagrange rows
//! collocate ∂₂F + ₜD_b^α ∂₃F with the right-sided L1 matrix (T_x = I,
//! T_y = Wᵀ, d = 1). At α = 1 the cells are sampled at their midpoints with
//! forward differences and the rows are the exact gradient of J_h
//! (T = P, V and d = w/h). The system is solved by damped Newton with
//! dense LU.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frac_kernels::{l1_weights, recip_gamma, FracOrder, Grid, SampledFunction};
use crate::problems::{
    certification_tolerance, constraint_values, euler_lagrange_residual, normality_check, Multipliers,
    ResidualReport, ScalarField3, VariationalProblem, DEFAULT_TOLERANCE_SCALE,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Sup-norm of the discrete system at which Newton stops.
    pub newton_tolerance: f64,
    /// Relative step for the finite-difference second partials.
    pub fd_step: f64,
    /// Number of α-decrements from the classical problem; 0 disables.
    pub continuation_steps: usize,
    /// Added to the diagonal of the trajectory block of the Jacobian.
    pub regularization: f64,
    /// Constant c of the certification tolerance c·h^{min(1, 2−α)}.
    pub tolerance_scale: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            newton_tolerance: 1e-8,
            fd_step: 1e-5,
            continuation_steps: 0,
            regularization: 0.0,
            tolerance_scale: DEFAULT_TOLERANCE_SCALE,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.max_iterations < 1 {
            return Err(Error::Precondition("max_iterations must be at least 1".into()));
        }
        if !positive(self.newton_tolerance) || !positive(self.fd_step) || !positive(self.tolerance_scale) {
            return Err(Error::Precondition("tolerances and steps must be positive".into()));
        }
        if !(self.regularization.is_finite() && self.regularization >= 0.0) {
            return Err(Error::Precondition("regularization must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub q: SampledFunction,
    pub lambda: Multipliers,
    /// Euler–Lagrange residual re-evaluated by the module operators.
    pub euler_lagrange: ResidualReport,
    /// ∫g_j − l_j re-evaluated by the module quadrature.
    pub constraint_residuals: Vec<f64>,
    pub boundary_residual: f64,
    /// Tolerance the reports were checked against.
    pub tolerance: f64,
    /// Sup-norm of the discrete system at the returned iterate.
    pub newton_residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

/// Outcome of a grid refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub solution: Solution,
    /// log(r_coarse / r_fine) / log(factor) for the Euler–Lagrange sup-norms.
    pub empirical_order: f64,
}

#[derive(Clone)]
enum Op {
    Identity,
    /// Row r holds (column, value) pairs.
    Sparse(Vec<Vec<(usize, f64)>>),
    Dense(DMatrix<f64>),
}

impl Op {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Op::Identity => x.to_vec(),
            Op::Sparse(rows) => rows.iter().map(|row| row.iter().map(|(j, v)| v * x[*j]).sum()).collect(),
            Op::Dense(a) => (a * DVector::from_column_slice(x)).as_slice().to_vec(),
        }
    }

    fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Op::Identity => y.to_vec(),
            Op::Sparse(rows) => {
                let len = rows.iter().flatten().map(|(j, _)| j + 1).max().unwrap_or(0);
                let mut out = vec![0.0; len];
                for (row, yr) in rows.iter().zip(y) {
                    for (j, v) in row {
                        out[*j] += v * yr;
                    }
                }
                out
            }
            Op::Dense(a) => a.tr_mul(&DVector::from_column_slice(y)).as_slice().to_vec(),
        }
    }

    fn to_dense(&self, len: usize) -> DMatrix<f64> {
        match self {
            Op::Identity => DMatrix::identity(len, len),
            Op::Sparse(rows) => {
                let mut a = DMatrix::zeros(rows.len(), len);
                for (r, row) in rows.iter().enumerate() {
                    for (j, v) in row {
                        a[(r, *j)] += v;
                    }
                }
                a
            }
            Op::Dense(a) => a.clone(),
        }
    }
}

/// Aᵀ diag(d) B.
fn sandwich(a: &Op, d: &[f64], b: &Op, len: usize) -> DMatrix<f64> {
    if let (Op::Sparse(ra), Op::Sparse(rb)) = (a, b) {
        let mut out = DMatrix::zeros(len, len);
        for ((row_a, row_b), dr) in ra.iter().zip(rb).zip(d) {
            for (i, va) in row_a {
                for (j, vb) in row_b {
                    out[(*i, *j)] += va * dr * vb;
                }
            }
        }
        return out;
    }
    if matches!(a, Op::Sparse(_)) || matches!(b, Op::Sparse(_)) {
        return sandwich(&Op::Dense(a.to_dense(len)), d, &Op::Dense(b.to_dense(len)), len);
    }
    let scaled = |m: &DMatrix<f64>| {
        let mut s = m.clone();
        for (r, mut row) in s.row_iter_mut().enumerate() {
            row *= d[r];
        }
        s
    };
    match (a, b) {
        (Op::Identity, Op::Identity) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        (Op::Identity, Op::Dense(b)) => scaled(b),
        (Op::Dense(a), Op::Identity) => scaled(a).transpose(),
        (Op::Dense(a), Op::Dense(b)) => {
            debug_assert_eq!(a.ncols(), len);
            a.tr_mul(&scaled(b))
        }
        _ => unreachable!("sparse operands are handled above"),
    }
}

/// Sample operators of the discrete functional.
struct Transcription {
    times: Vec<f64>,
    p: Op,
    v: Op,
    w: Vec<f64>,
    tx: Op,
    ty: Op,
    d: Vec<f64>,
    len: usize,
}

impl Transcription {
    fn new(grid: &Grid, order: FracOrder) -> Self {
        let (m, h, len) = (grid.m(), grid.h(), grid.len());
        let alpha = order.alpha();
        if order.is_integer() {
            let p = (0..m).map(|r| vec![(r, 0.5), (r + 1, 0.5)]).collect();
            let v = (0..m).map(|r| vec![(r, -1.0 / h), (r + 1, 1.0 / h)]).collect();
            let (p, v) = (Op::Sparse(p), Op::Sparse(v));
            return Self {
                times: (0..m).map(|r| grid.a() + (r as f64 + 0.5) * h).collect(),
                tx: p.clone(),
                ty: v.clone(),
                p,
                v,
                w: vec![h; m],
                d: vec![1.0; m],
                len,
            };
        }
        let b = l1_weights(alpha, m);
        let c = h.powf(-alpha) * recip_gamma(2.0 - alpha);
        let c0 = recip_gamma(1.0 - alpha);
        let mut v = DMatrix::zeros(len, len);
        for k in 1..len {
            v[(k, 0)] = (k as f64 * h).powf(-alpha) * c0;
            for i in 0..=k {
                let mut coef = 0.0;
                if i >= 1 {
                    coef += b[k - i];
                }
                if i < k {
                    coef -= b[k - 1 - i];
                }
                v[(k, i)] += c * coef;
            }
        }
        // right-sided matrix by reflection; its last row is undefined and unused
        let mut wt = DMatrix::zeros(len, len);
        for i in 0..m {
            for r in i..len {
                wt[(r, i)] = v[(m - i, m - r)];
            }
        }
        // same extrapolation as the module quadrature
        if m >= 2 {
            for i in 0..len {
                v[(0, i)] = 2.0 * v[(1, i)] - v[(2, i)];
            }
        }
        let mut w = vec![h; len];
        w[0] = 0.5 * h;
        w[m] = 0.5 * h;
        Self {
            times: grid.nodes().collect(),
            p: Op::Identity,
            v: Op::Dense(v),
            w,
            tx: Op::Identity,
            ty: Op::Dense(wt),
            d: vec![1.0; len],
            len,
        }
    }

    fn rows(&self) -> usize {
        self.times.len()
    }
}

/// Field values and gradients at every sample row.
struct RowData {
    value: Vec<f64>,
    gx: Vec<f64>,
    gy: Vec<f64>,
}

struct System<'a> {
    problem: &'a VariationalProblem,
    tr: Transcription,
    n: usize,
    k: usize,
    config: SolverConfig,
}

impl<'a> System<'a> {
    fn new(problem: &'a VariationalProblem, config: SolverConfig) -> Self {
        Self {
            problem,
            tr: Transcription::new(problem.grid(), problem.order()),
            n: problem.dim(),
            k: problem.k(),
            config,
        }
    }

    fn interior(&self) -> usize {
        (self.tr.len - 2) * self.n
    }

    fn unknowns(&self) -> usize {
        self.interior() + self.k
    }

    /// Full node-major trajectory from the unknown vector.
    fn trajectory(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut q = Vec::with_capacity(self.tr.len * n);
        q.extend_from_slice(self.problem.left());
        q.extend_from_slice(&x[..self.interior()]);
        q.extend_from_slice(self.problem.right());
        q
    }

    /// (Pq, Vq), row-major with n components per row.
    fn samples(&self, q: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (n, rows, len) = (self.n, self.tr.rows(), self.tr.len);
        let mut xs = vec![0.0; rows * n];
        let mut ys = vec![0.0; rows * n];
        for c in 0..n {
            let qc: Vec<f64> = (0..len).map(|i| q[i * n + c]).collect();
            for (r, (px, vy)) in self.tr.p.apply(&qc).into_iter().zip(self.tr.v.apply(&qc)).enumerate() {
                xs[r * n + c] = px;
                ys[r * n + c] = vy;
            }
        }
        (xs, ys)
    }

    fn row_data(&self, f: &ScalarField3, xs: &[f64], ys: &[f64]) -> RowData {
        let n = self.n;
        let rows = self.tr.rows();
        let mut d = RowData {
            value: vec![0.0; rows],
            gx: vec![0.0; rows * n],
            gy: vec![0.0; rows * n],
        };
        for r in 0..rows {
            let (t, x, y) = (self.tr.times[r], &xs[r * n..(r + 1) * n], &ys[r * n..(r + 1) * n]);
            d.value[r] = f.eval(t, x, y);
            f.grad_x(t, x, y, &mut d.gx[r * n..(r + 1) * n]);
            f.grad_y(t, x, y, &mut d.gy[r * n..(r + 1) * n]);
        }
        d
    }

    /// Pᵀ(w ∘ ∂₂f) + Vᵀ(w ∘ ∂₃f) at the interior nodes, unknown-major.
    fn weighted_gradient(&self, d: &RowData) -> Vec<f64> {
        self.project(&self.tr.p, &self.tr.v, &self.tr.w, d)
    }

    /// Euler–Lagrange rows of f.
    fn euler_lagrange(&self, d: &RowData) -> Vec<f64> {
        self.project(&self.tr.tx, &self.tr.ty, &self.tr.d, d)
    }

    /// Aᵀ(s ∘ ∂₂f) + Bᵀ(s ∘ ∂₃f) at the interior nodes, unknown-major.
    fn project(&self, a: &Op, b: &Op, scale: &[f64], d: &RowData) -> Vec<f64> {
        let (n, rows, len) = (self.n, self.tr.rows(), self.tr.len);
        let mut out = vec![0.0; self.interior()];
        for c in 0..n {
            let wx: Vec<f64> = (0..rows).map(|r| scale[r] * d.gx[r * n + c]).collect();
            let wy: Vec<f64> = (0..rows).map(|r| scale[r] * d.gy[r * n + c]).collect();
            let sum: Vec<f64> = a
                .apply_t(&wx)
                .into_iter()
                .zip(b.apply_t(&wy))
                .map(|(a, b)| a + b)
                .collect();
            for i in 1..len - 1 {
                out[(i - 1) * n + c] = sum[i];
            }
        }
        out
    }

    fn augmented(&self, lambda: &[f64]) -> Result<ScalarField3> {
        let mut terms = vec![(1.0, self.problem.lagrangian().clone())];
        terms.extend(lambda.iter().zip(self.problem.constraints()).map(|(l, g)| (-l, g.clone())));
        ScalarField3::linear_combination(&terms)
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let ni = self.interior();
        let lambda = &x[ni..];
        let q = self.trajectory(x);
        let (xs, ys) = self.samples(&q);
        let f = self.augmented(lambda)?;
        let mut r = self.euler_lagrange(&self.row_data(&f, &xs, &ys));
        for (g, l) in self.problem.constraints().iter().zip(self.problem.levels()) {
            let d = self.row_data(g, &xs, &ys);
            let integral: f64 = d.value.iter().zip(&self.tr.w).map(|(v, w)| v * w).sum();
            r.push(integral - l);
        }
        Ok(r)
    }

    fn jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (n, ni, rows, len) = (self.n, self.interior(), self.tr.rows(), self.tr.len);
        let lambda = &x[ni..];
        let q = self.trajectory(x);
        let (xs, ys) = self.samples(&q);
        let f = self.augmented(lambda)?;

        // Hessian of F in (x, y) per row, by central differences of the
        // gradient; hess[r][a][b] with a, b in 0..2n
        let dim = 2 * n;
        let mut hess = vec![0.0; rows * dim * dim];
        let mut z = vec![0.0; dim];
        let mut up = vec![0.0; dim];
        let mut down = vec![0.0; dim];
        let grad = |t: f64, z: &[f64], out: &mut [f64]| {
            f.grad_x(t, &z[..n], &z[n..], &mut out[..n]);
            f.grad_y(t, &z[..n], &z[n..], &mut out[n..]);
        };
        for r in 0..rows {
            let t = self.tr.times[r];
            z[..n].copy_from_slice(&xs[r * n..(r + 1) * n]);
            z[n..].copy_from_slice(&ys[r * n..(r + 1) * n]);
            let block = &mut hess[r * dim * dim..(r + 1) * dim * dim];
            for b in 0..dim {
                let z0 = z[b];
                let step = self.config.fd_step * (1.0 + z0.abs());
                z[b] = z0 + step;
                grad(t, &z, &mut up);
                z[b] = z0 - step;
                grad(t, &z, &mut down);
                z[b] = z0;
                for a in 0..dim {
                    block[a * dim + b] = (up[a] - down[a]) / (2.0 * step);
                }
            }
            for a in 0..dim {
                for b in 0..a {
                    let s = 0.5 * (block[a * dim + b] + block[b * dim + a]);
                    block[a * dim + b] = s;
                    block[b * dim + a] = s;
                }
            }
        }

        let total = self.unknowns();
        let mut jac = DMatrix::zeros(total, total);
        let tests = [&self.tr.tx, &self.tr.ty];
        let ops = [&self.tr.p, &self.tr.v];
        for c in 0..n {
            for d in 0..n {
                let mut full = DMatrix::<f64>::zeros(len, len);
                for (sa, opa) in tests.iter().enumerate() {
                    for (sb, opb) in ops.iter().enumerate() {
                        let (ia, ib) = (sa * n + c, sb * n + d);
                        let diag: Vec<f64> = (0..rows)
                            .map(|r| self.tr.d[r] * hess[r * dim * dim + ia * dim + ib])
                            .collect();
                        if diag.iter().all(|v| *v == 0.0) {
                            continue;
                        }
                        full += sandwich(opa, &diag, opb, len);
                    }
                }
                for i in 1..len - 1 {
                    for j in 1..len - 1 {
                        jac[((i - 1) * n + c, (j - 1) * n + d)] = full[(i, j)];
                    }
                }
            }
        }
        for i in 0..ni {
            jac[(i, i)] += self.config.regularization;
        }
        for (j, g) in self.problem.constraints().iter().enumerate() {
            let d = self.row_data(g, &xs, &ys);
            for (i, v) in self.euler_lagrange(&d).iter().enumerate() {
                jac[(i, ni + j)] = -v;
            }
            for (i, v) in self.weighted_gradient(&d).iter().enumerate() {
                jac[(ni + j, i)] = *v;
            }
        }
        Ok(jac)
    }
}

fn sup(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Linear interpolation of `q` onto `grid`; values outside the source
/// interval take the nearest end value.
pub fn resample(q: &SampledFunction, grid: Grid) -> SampledFunction {
    let src = q.grid();
    let n = q.dim();
    SampledFunction::from_vec_fn(grid, n, |t, out| {
        let s = ((t - src.a()) / src.h()).clamp(0.0, src.m() as f64);
        let i = (s.floor() as usize).min(src.m() - 1);
        let frac = s - i as f64;
        for (c, o) in out.iter_mut().enumerate() {
            *o = (1.0 - frac) * q.at(i)[c] + frac * q.at(i + 1)[c];
        }
    })
}

struct NewtonOutcome {
    x: Vec<f64>,
    residual: f64,
    converged: bool,
    iterations: usize,
    warnings: Vec<String>,
}

fn newton(system: &System<'_>, mut x: Vec<f64>) -> Result<NewtonOutcome> {
    let config = system.config;
    let mut r = system.residual(&x)?;
    let mut iterations = 0;
    let mut warnings = Vec::new();
    loop {
        let res = sup(&r);
        if res <= config.newton_tolerance {
            return Ok(NewtonOutcome {
                x,
                residual: res,
                converged: true,
                iterations,
                warnings,
            });
        }
        if iterations >= config.max_iterations || !res.is_finite() {
            warnings.push(format!(
                "Newton stopped after {iterations} iterations with residual {res:.3e}"
            ));
            return Ok(NewtonOutcome {
                x,
                residual: res,
                converged: false,
                iterations,
                warnings,
            });
        }
        let jac = system.jacobian(&x)?;
        let rhs = DVector::from_vec(r.iter().map(|v| -v).collect());
        let step = jac
            .lu()
            .solve(&rhs)
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularJacobian { iteration: iterations })?;
        iterations += 1;

        let base = norm2(&r);
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=30 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + scale * s).collect();
            let tr = system.residual(&trial)?;
            let nr = norm2(&tr);
            if nr.is_finite() && nr < base {
                accepted = Some((trial, tr));
                break;
            }
            scale *= 0.5;
        }
        match accepted {
            Some((trial, tr)) => {
                x = trial;
                r = tr;
            }
            None => {
                warnings.push(format!(
                    "line search found no decrease at iteration {iterations} (residual {res:.3e})"
                ));
                return Ok(NewtonOutcome {
                    x,
                    residual: res,
                    converged: false,
                    iterations,
                    warnings,
                });
            }
        }
    }
}

fn initial_unknowns(problem: &VariationalProblem, guess: Option<&Solution>) -> Result<Vec<f64>> {
    let grid = *problem.grid();
    let (n, m) = (problem.dim(), grid.m());
    let mut x = Vec::with_capacity((m - 1) * n + problem.k());
    match guess {
        Some(g) => {
            if g.q.dim() != n || g.lambda.len() != problem.k() {
                return Err(Error::DimensionMismatch {
                    what: "initial guess",
                    expected: n,
                    found: g.q.dim(),
                });
            }
            let q = resample(&g.q, grid);
            for i in 1..m {
                x.extend_from_slice(q.at(i));
            }
            x.extend_from_slice(g.lambda.as_slice());
        }
        None => {
            for i in 1..m {
                let s = i as f64 / m as f64;
                for c in 0..n {
                    x.push((1.0 - s) * problem.left()[c] + s * problem.right()[c]);
                }
            }
            x.extend(std::iter::repeat_n(0.0, problem.k()));
        }
    }
    Ok(x)
}

/// Solves the discretized isoperimetric problem. Non-convergence is not an
/// error: the best iterate is returned with `converged = false`.
pub fn solve(problem: &VariationalProblem, config: &SolverConfig, guess: Option<&Solution>) -> Result<Solution> {
    config.validate()?;
    let alpha = problem.order().alpha();
    if alpha > 1.0 {
        return Err(Error::UnsupportedOrder(alpha));
    }
    let mut x = initial_unknowns(problem, guess)?;
    let mut iterations = 0;
    let mut warnings = Vec::new();

    let steps = if alpha < 1.0 { config.continuation_steps } else { 0 };
    for s in 0..steps {
        let a = 1.0 + (alpha - 1.0) * s as f64 / steps as f64;
        let stage = problem.clone().with_order(FracOrder::new(a)?);
        let out = newton(&System::new(&stage, *config), x)?;
        iterations += out.iterations;
        if !out.converged {
            warnings.push(format!("continuation stage alpha = {a} did not converge"));
        }
        x = out.x;
    }
    let system = System::new(problem, *config);
    let out = newton(&system, x)?;
    iterations += out.iterations;
    warnings.extend(out.warnings);

    let grid = *problem.grid();
    let q = SampledFunction::new(grid, problem.dim(), system.trajectory(&out.x))?;
    let lambda = Multipliers::new(out.x[system.interior()..].to_vec())?;
    finish(problem, config, q, lambda, out.residual, out.converged, iterations, warnings)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    problem: &VariationalProblem,
    config: &SolverConfig,
    q: SampledFunction,
    lambda: Multipliers,
    newton_residual: f64,
    newton_converged: bool,
    iterations: usize,
    mut warnings: Vec<String>,
) -> Result<Solution> {
    let grid = *problem.grid();
    let tolerance = certification_tolerance(&grid, problem.order(), config.tolerance_scale);
    let euler_lagrange = euler_lagrange_residual(problem, &lambda, &q)?;
    let constraint_residuals: Vec<f64> = constraint_values(problem, &q)?
        .iter()
        .zip(problem.levels())
        .map(|(v, l)| v - l)
        .collect();
    let m = grid.m();
    let boundary_residual = q
        .at(0)
        .iter()
        .zip(problem.left())
        .chain(q.at(m).iter().zip(problem.right()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let reports_pass = euler_lagrange.passes(tolerance)
        && constraint_residuals.iter().all(|r| r.abs() <= tolerance)
        && boundary_residual <= tolerance;
    if newton_converged && !reports_pass {
        warnings.push(format!(
            "discrete system solved but the re-evaluated residuals exceed {tolerance:.3e} \
             (Euler-Lagrange sup-norm {:.3e})",
            euler_lagrange.sup_norm
        ));
    }
    if newton_converged && problem.k() > 0 {
        let mut all_abnormal = true;
        for j in 0..problem.k() {
            all_abnormal &= normality_check(problem, &q, j)?.abnormal;
        }
        if all_abnormal {
            warnings.push("every constraint is abnormal at the solution; the multipliers are not determined".into());
        }
    }
    Ok(Solution {
        q,
        lambda,
        euler_lagrange,
        constraint_residuals,
        boundary_residual,
        tolerance,
        newton_residual,
        converged: newton_converged && reports_pass,
        iterations,
        warnings,
    })
}

/// Re-solves on a grid with m·factor intervals, warm-started from `solution`.
pub fn refine(
    problem: &VariationalProblem,
    solution: &Solution,
    factor: usize,
    config: &SolverConfig,
) -> Result<Refinement> {
    if !solution.converged {
        return Err(Error::Precondition("refine needs a converged solution".into()));
    }
    let fine = problem.clone().with_grid(problem.grid().refined(factor)?);
    let config = SolverConfig {
        continuation_steps: 0,
        ..*config
    };
    let refined = solve(&fine, &config, Some(solution))?;
    let empirical_order =
        (solution.euler_lagrange.sup_norm / refined.euler_lagrange.sup_norm).ln() / (factor as f64).ln();
    Ok(Refinement {
        solution: refined,
        empirical_order,
    })
}
