//! `check` and `solve`.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;

use fracnoether::frac_kernels::SampledFunction;
use fracnoether::hamiltonian::{
    autonomous_energy_residual, control_invariance_first_order_check, hamiltonian_noether_residual,
    pontryagin_residuals, PontryaginExtremal,
};
use fracnoether::noether::{invariance_first_order_check, momentum_law_residual, noether_law_residual};
use fracnoether::problems::{
    certification_tolerance, constraint_values, euler_lagrange_residual, Multipliers, ResidualReport,
    VariationalProblem, DEFAULT_TOLERANCE_SCALE,
};
use fracnoether::solver::{solve, SolverConfig};

use crate::report::{CheckEntry, ConstraintEntry, GridInfo, RunReport, Sink, SolverInfo};
use crate::spec::{sample_exprs, Spec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_SPEC: i32 = 3;

/// Seed for the autonomy probe of the Hamiltonian check.
const AUTONOMY_SEED: u64 = 0x5eed;

#[derive(Debug)]
pub enum Failure {
    /// The spec cannot support the request.
    Spec(String),
    Compute(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Spec(_) => EXIT_SPEC,
            Failure::Compute(_) => EXIT_COMPUTE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Spec(m) => write!(f, "invalid spec: {m}"),
            Failure::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl From<fracnoether::Error> for Failure {
    fn from(e: fracnoether::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(format!("{e:#}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    El,
    Noether,
    Momentum,
    Hamiltonian,
    Invariance,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::El => "el",
            Which::Noether => "noether",
            Which::Momentum => "momentum",
            Which::Hamiltonian => "hamiltonian",
            Which::Invariance => "invariance",
        }
    }
}

fn base_report(command: &str, spec: &Spec, label: &str, tolerance: f64) -> RunReport {
    let grid = spec.grid();
    RunReport {
        command: command.into(),
        which: None,
        spec: Some(label.to_string()),
        alpha: Some(spec.alpha),
        grid: Some(GridInfo {
            a: grid.a(),
            b: grid.b(),
            m: grid.m(),
            h: grid.h(),
        }),
        dim: Some(spec.n),
        multipliers: Vec::new(),
        tolerance: Some(tolerance),
        checks: Vec::new(),
        constraints: Vec::new(),
        boundary_residual: None,
        solver: None,
        selftest: None,
        warnings: Vec::new(),
        status: String::new(),
        exit_code: EXIT_PASS,
    }
}

fn finish(mut report: RunReport, computation_failed: bool) -> RunReport {
    let passed = report.checks.iter().all(|c| c.passed) && report.constraints.iter().all(|c| c.passed);
    let (status, code) = if computation_failed {
        ("error", EXIT_COMPUTE)
    } else if passed {
        ("pass", EXIT_PASS)
    } else {
        ("fail", EXIT_RESIDUAL)
    };
    report.status = status.into();
    report.exit_code = code;
    report
}

fn tolerance(spec: &Spec, tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(|| certification_tolerance(&spec.grid(), spec.order(), DEFAULT_TOLERANCE_SCALE))
}

fn constraint_entries(problem: &VariationalProblem, q: &SampledFunction, tol: f64) -> Result<Vec<ConstraintEntry>, Failure> {
    let values = constraint_values(problem, q)?;
    Ok(values
        .iter()
        .zip(problem.levels())
        .enumerate()
        .map(|(index, (value, level))| {
            let residual = value - level;
            ConstraintEntry {
                index,
                value: *value,
                level: *level,
                residual,
                tolerance: tol,
                passed: residual.abs() <= tol,
            }
        })
        .collect())
}

fn boundary_residual(problem: &VariationalProblem, q: &SampledFunction) -> f64 {
    let m = q.grid().m();
    let diff = |node: usize, target: &[f64]| {
        q.at(node).iter().zip(target).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    diff(0, problem.left()).max(diff(m, problem.right()))
}

fn need_variational(spec: &Spec, what: &str) -> Result<VariationalProblem, Failure> {
    if spec.is_control() {
        return Err(Failure::Spec(format!("{what} needs a [boundary] spec, not a [control] one")));
    }
    Ok(spec.variational_problem()?)
}

struct CheckRun<'a> {
    sink: &'a Sink,
    tol: f64,
    report: RunReport,
}

impl CheckRun<'_> {
    fn add(&mut self, name: &str, r: &ResidualReport) -> Result<(), Failure> {
        let profile = self.sink.profile(&format!("{name}.csv"), r)?;
        self.report.checks.push(CheckEntry::from_report(name, r, self.tol, Some(profile)));
        Ok(())
    }
}

/// Runs one family of residual evaluators on the spec's candidate trajectory.
pub fn check(spec: &Spec, label: &str, which: Which, tol: Option<f64>, out: &Path) -> Result<RunReport, Failure> {
    let candidate = spec
        .trajectory
        .as_ref()
        .ok_or_else(|| Failure::Spec("missing trajectory: check needs a [trajectory] table".into()))?;
    let tol = tolerance(spec, tol);
    let mut report = base_report("check", spec, label, tol);
    report.which = Some(which.name().into());
    let lambda = match &spec.multipliers {
        Some(l) => l.clone(),
        None => {
            if spec.k() > 0 {
                report.warnings.push("no multipliers given; using zeros".into());
            }
            vec![0.0; spec.k()]
        }
    };
    report.multipliers = lambda.clone();
    let mult = Multipliers::new(lambda)?;
    let q = spec.sample(&candidate.q)?;
    let sink = Sink::new(out)?;
    let mut run = CheckRun { sink: &sink, tol, report };

    let symmetry_missing = || Failure::Spec(format!("check --which {} needs a [symmetry] table", which.name()));
    match which {
        Which::El => {
            let p = need_variational(spec, "check --which el")?;
            run.add("euler_lagrange", &euler_lagrange_residual(&p, &mult, &q)?)?;
            run.report.constraints = constraint_entries(&p, &q, tol)?;
            run.report.boundary_residual = Some(boundary_residual(&p, &q));
        }
        Which::Noether => {
            let p = need_variational(spec, "check --which noether")?;
            let gen = spec.generator().ok_or_else(symmetry_missing)?;
            run.add("noether", &noether_law_residual(&p, &mult, &q, &gen)?)?;
        }
        Which::Momentum => {
            let p = need_variational(spec, "check --which momentum")?;
            let gen = spec.generator().ok_or_else(symmetry_missing)?;
            if gen.sample_tau(&q).values().iter().any(|t| *t != 0.0) {
                return Err(Failure::Spec(
                    "check --which momentum needs tau = 0; use --which noether for time changes".into(),
                ));
            }
            run.add("momentum", &momentum_law_residual(&p, &mult, &q, &gen)?)?;
        }
        Which::Invariance => {
            if spec.is_control() {
                let cp = spec.control_problem()?;
                let ext = control_extremal(spec, &q, &mult)?;
                let sym = spec.control_symmetry().ok_or_else(symmetry_missing)?;
                run.add("invariance", &control_invariance_first_order_check(&cp, &ext, &sym)?)?;
            } else {
                let p = spec.variational_problem()?;
                let gen = spec.generator().ok_or_else(symmetry_missing)?;
                run.add("invariance", &invariance_first_order_check(&p, &mult, &q, &gen)?)?;
            }
        }
        Which::Hamiltonian => {
            let cp = spec.control_problem()?;
            let ext = if spec.is_control() {
                control_extremal(spec, &q, &mult)?
            } else {
                PontryaginExtremal::lift(&spec.variational_problem()?, &mult, &q)?
            };
            let r = pontryagin_residuals(&cp, &ext)?;
            run.add("pontryagin_state", &r.state)?;
            run.add("pontryagin_costate", &r.costate)?;
            run.add("pontryagin_stationary", &r.stationary)?;
            if cp.is_autonomous(32, AUTONOMY_SEED) {
                run.add("energy_law", &autonomous_energy_residual(&cp, &ext)?)?;
            } else {
                run.report
                    .warnings
                    .push("problem depends explicitly on t; energy law skipped".into());
            }
            if let Some(sym) = spec.control_symmetry() {
                run.add("hamiltonian_noether", &hamiltonian_noether_residual(&cp, &ext, &sym)?)?;
            }
        }
    }
    Ok(finish(run.report, false))
}

fn control_extremal(spec: &Spec, q: &SampledFunction, mult: &Multipliers) -> Result<PontryaginExtremal, Failure> {
    let c = spec.trajectory.as_ref().expect("checked by caller");
    let (Some(u), Some(p)) = (&c.u, &c.p) else {
        return Err(Failure::Spec("control specs need trajectory.u and trajectory.p".into()));
    };
    let grid = spec.grid();
    Ok(PontryaginExtremal::new(
        q.clone(),
        sample_exprs(grid, u),
        sample_exprs(grid, p),
        mult.clone(),
    )?)
}

/// Solver options exposed on the command line.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub config: SolverConfig,
    pub tol: Option<f64>,
}

/// Solves the spec's problem from a cold start.
pub fn solve_spec(spec: &Spec, label: &str, opts: &SolveOptions, out: &Path) -> Result<RunReport, Failure> {
    let p = need_variational(spec, "solve")?;
    let config = SolverConfig {
        tolerance_scale: match opts.tol {
            Some(t) => t / certification_tolerance(&spec.grid(), spec.order(), 1.0),
            None => opts.config.tolerance_scale,
        },
        ..opts.config
    };
    let s = solve(&p, &config, None)?;
    let tol = s.tolerance;
    let sink = Sink::new(out)?;
    let mut report = base_report("solve", spec, label, tol);
    report.multipliers = s.lambda.as_slice().to_vec();
    report.warnings = s.warnings.clone();
    let reference = spec.reference.as_ref().map(|r| spec.sample(r)).transpose()?;
    let scaled_deviation = reference.as_ref().map(|r| {
        let window = s.euler_lagrange.window();
        let scale = window.clone().flat_map(|i| r.at(i).to_vec()).fold(0.0, |m: f64, v| m.max(v.abs()));
        let dev = s.q.max_abs_diff(r, window);
        if scale > 0.0 {
            dev / scale
        } else {
            dev
        }
    });
    let trajectory = sink.trajectory("trajectory.csv", &s.q, reference.as_ref())?;
    let profile = sink.profile("euler_lagrange.csv", &s.euler_lagrange)?;
    report
        .checks
        .push(CheckEntry::from_report("euler_lagrange", &s.euler_lagrange, tol, Some(profile)));
    report.constraints = constraint_entries(&p, &s.q, tol)?;
    report.boundary_residual = Some(s.boundary_residual);
    let newton_converged = s.newton_residual <= config.newton_tolerance;
    report.solver = Some(SolverInfo {
        converged: s.converged,
        newton_converged,
        iterations: s.iterations,
        newton_residual: s.newton_residual,
        newton_tolerance: config.newton_tolerance,
        scaled_deviation,
        trajectory,
    });
    Ok(finish(report, !newton_converged))
}
