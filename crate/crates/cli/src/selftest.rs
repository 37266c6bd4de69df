//! Bundled oracle suite.

use clap::ValueEnum;
use serde::Serialize;

use fracnoether::frac_kernels::{gamma, left_rl_derivative, FracOrder, Grid, SampledFunction};
use fracnoether::hamiltonian::{
    autonomous_energy_residual, pontryagin_residuals, ControlProblem, PontryaginExtremal, VectorField3,
};
use fracnoether::problems::{
    certification_tolerance, constraint_values, euler_lagrange_residual, Multipliers, ScalarField3,
    VariationalProblem, DEFAULT_TOLERANCE_SCALE,
};
use fracnoether::solver::{solve, SolverConfig};
use fracnoether::Result;

/// Deliberate corruption used to show that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Scales gamma(x) by 1 + x/100 inside the kernel oracles.
    Gamma,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).expect("fixed orders are valid")
}

struct Oracle {
    fault: Option<Fault>,
}

impl Oracle {
    fn gamma(&self, x: f64) -> Result<f64> {
        let g = gamma(x)?;
        Ok(match self.fault {
            Some(Fault::Gamma) => g * (1.0 + 0.01 * x),
            None => g,
        })
    }

    fn rel_error(&self, num: &SampledFunction, exact: impl Fn(f64) -> f64) -> f64 {
        let grid = num.grid();
        (0..grid.len())
            .filter(|&i| grid.node(i) >= 0.05 - 1e-12)
            .map(|i| {
                let e = exact(grid.node(i));
                (num.value(i) - e).abs() / e.abs()
            })
            .fold(0.0, f64::max)
    }

    fn power_rule(&self) -> Result<SelftestEntry> {
        let c = self.gamma(3.0)? / self.gamma(2.5)?;
        let grid = Grid::new(0.0, 1.0, 2000)?;
        let d = left_rl_derivative(&SampledFunction::from_fn(grid, |t| t * t), order(0.5))?;
        let err = self.rel_error(&d, |t| c * t.powf(1.5));
        Ok(entry("kernel power rule", err <= 1e-3, format!("max rel err {err:.2e} (limit 1e-3)")))
    }

    fn constant_rule(&self) -> Result<SelftestEntry> {
        let c = 1.0 / self.gamma(0.5)?;
        let grid = Grid::new(0.0, 1.0, 1000)?;
        let d = left_rl_derivative(&SampledFunction::from_fn(grid, |_| 1.0), order(0.5))?;
        let err = self.rel_error(&d, |t| c / t.sqrt());
        Ok(entry("kernel constant rule", err <= 1e-3, format!("max rel err {err:.2e} (limit 1e-3)")))
    }
}

fn entry(name: &str, passed: bool, detail: String) -> SelftestEntry {
    SelftestEntry {
        name: name.into(),
        passed,
        detail,
    }
}

fn example1(alpha: f64, m: usize) -> Result<VariationalProblem> {
    let l = ScalarField3::new(1, 1, |t, _, v| t.powi(4) + v[0] * v[0])
        .with_partials(|_, _, _, g| g[0] = 0.0, |_, _, v, g| g[0] = 2.0 * v[0]);
    let g = ScalarField3::new(1, 1, |t, _, v| t * t * v[0])
        .with_partials(|_, _, _, g| g[0] = 0.0, |t, _, _, g| g[0] = t * t);
    let grid = Grid::new(0.0, 1.0, m)?;
    VariationalProblem::new(order(alpha), grid, l, vec![0.0], vec![2.0 / gamma(3.0 + alpha)?])?.with_constraint(g, 0.2)
}

fn example1_end_to_end() -> Result<SelftestEntry> {
    let alpha = 0.5;
    let p = example1(alpha, 200)?;
    let s = solve(&p, &SolverConfig::default(), None)?;
    let c = 2.0 / gamma(3.0 + alpha)?;
    let exact = SampledFunction::from_fn(*p.grid(), |t| c * t.powf(2.0 + alpha));
    let window = s.euler_lagrange.window();
    let dev = s.q.max_abs_diff(&exact, window) / c;
    let lambda = s.lambda.as_slice()[0];
    let tol = certification_tolerance(p.grid(), p.order(), DEFAULT_TOLERANCE_SCALE);
    let el = euler_lagrange_residual(&p, &s.lambda, &s.q)?.sup_norm;
    let integral = constraint_values(&p, &s.q)?[0];
    let passed = s.converged && (lambda - 2.0).abs() <= 0.05 && dev <= 5e-3 && el <= tol && (integral - 0.2).abs() <= 1e-6;
    Ok(entry(
        "Example 1 end to end",
        passed,
        format!("lambda {lambda:.5}, scaled deviation {dev:.2e}, EL sup {el:.2e} (tol {tol:.2e})"),
    ))
}

fn classical_regression() -> Result<SelftestEntry> {
    let l = 1.0 / 24.0;
    let c = 6.0 * l;
    let grid = Grid::new(0.0, 1.0, 2000)?;
    let lag = ScalarField3::new(1, 1, |_, _, v| v[0] * v[0])
        .with_partials(|_, _, _, g| g[0] = 0.0, |_, _, v, g| g[0] = 2.0 * v[0]);
    let g = ScalarField3::new(1, 1, |_, q, _| q[0]).with_partials(|_, _, _, g| g[0] = 1.0, |_, _, _, g| g[0] = 0.0);
    let p = VariationalProblem::new(order(1.0), grid, lag, vec![0.0], vec![0.0])?.with_constraint(g, l)?;
    let s = solve(&p, &SolverConfig::default(), None)?;
    let exact = SampledFunction::from_fn(grid, |t| c * t * (1.0 - t));
    let dev = s.q.max_abs_diff(&exact, 0..grid.len());
    let dl = (s.lambda.as_slice()[0] - 4.0 * c).abs();
    Ok(entry(
        "classical parabola",
        s.converged && dev <= 1e-6 && dl <= 1e-6,
        format!("multiplier error {dl:.2e}, trajectory error {dev:.2e} (limit 1e-6)"),
    ))
}

fn autonomous_law() -> Result<SelftestEntry> {
    let alpha = 0.5;
    let grid = Grid::new(0.0, 1.0, 1000)?;
    let c = 2.0 / gamma(3.0 + alpha)?;
    let psi = move |q: f64| (q.abs() / c).powf(0.8);
    let dpsi = move |q: f64| 0.8 / c * (q.abs() / c).powf(-0.2) * q.signum();
    let l = ScalarField3::new(1, 1, move |_, q, u| psi(q[0]).powi(2) + u[0] * u[0]).with_partials(
        move |_, q, _, g| g[0] = 2.0 * psi(q[0]) * dpsi(q[0]),
        |_, _, u, g| g[0] = 2.0 * u[0],
    );
    let g = ScalarField3::new(1, 1, move |_, q, u| psi(q[0]) * u[0])
        .with_partials(move |_, q, u, g| g[0] = dpsi(q[0]) * u[0], move |_, q, _, g| g[0] = psi(q[0]));
    let cp = ControlProblem::new(order(alpha), grid, l, VectorField3::control_identity(1), vec![0.0])?
        .with_constraint(g, 0.2)?;
    let ext = PontryaginExtremal::new(
        SampledFunction::from_fn(grid, |t| c * t.powf(2.0 + alpha)),
        SampledFunction::from_fn(grid, |t| t * t),
        SampledFunction::zeros(grid, 1),
        Multipliers::new(vec![2.0])?,
    )?;
    let tol = certification_tolerance(&grid, order(alpha), DEFAULT_TOLERANCE_SCALE);
    let extremal = pontryagin_residuals(&cp, &ext)?.certified(tol);
    let law = autonomous_energy_residual(&cp, &ext)?.sup_norm;
    Ok(entry(
        "autonomous Hamiltonian law",
        extremal && law <= tol,
        format!("Pontryagin residuals certified {extremal}, energy law sup {law:.2e} (tol {tol:.2e})"),
    ))
}

/// Runs every oracle; computation errors count as failures.
pub fn run(fault: Option<Fault>) -> Vec<SelftestEntry> {
    let oracle = Oracle { fault };
    type Check<'a> = (&'a str, Box<dyn Fn() -> Result<SelftestEntry> + 'a>);
    let checks: Vec<Check> = vec![
        ("kernel power rule", Box::new(|| oracle.power_rule())),
        ("kernel constant rule", Box::new(|| oracle.constant_rule())),
        ("Example 1 end to end", Box::new(example1_end_to_end)),
        ("classical parabola", Box::new(classical_regression)),
        ("autonomous Hamiltonian law", Box::new(autonomous_law)),
    ];
    checks
        .into_iter()
        .map(|(name, f)| f().unwrap_or_else(|e| entry(name, false, format!("error: {e}"))))
        .collect()
}
