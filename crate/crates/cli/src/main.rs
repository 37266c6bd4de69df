use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use fracnoether::solver::SolverConfig;
use fracnoether_cli::commands::{self, Failure, SolveOptions, Which, EXIT_PASS, EXIT_SPEC};
use fracnoether_cli::report::{RunReport, Sink};
use fracnoether_cli::selftest::{self, Fault};
use fracnoether_cli::spec::{parse_spec, Overrides, Spec};

#[derive(Parser)]
#[command(name = "fracnoether", version, about = "Residual checks and solves for fractional isoperimetric problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Override the number of grid intervals m.
    #[arg(long = "grid", value_name = "M")]
    grid: Option<usize>,
    /// Override the fractional order.
    #[arg(long = "alpha", value_name = "X")]
    alpha: Option<f64>,
    /// Absolute residual tolerance (default 10·h^min(1, 2−alpha)).
    #[arg(long = "tol", value_name = "T")]
    tol: Option<f64>,
    /// Output directory for report.json and CSV files.
    #[arg(long = "out", value_name = "DIR", default_value = "fracnoether-out")]
    out: PathBuf,
    spec: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate residuals along the spec's candidate trajectory.
    Check {
        #[arg(long = "which", value_enum, default_value = "el")]
        which: Which,
        /// Override the multipliers, comma separated.
        #[arg(long = "lambda", value_name = "L1,L2,..", value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve the spec's problem from a cold start.
    Solve {
        #[arg(long = "max-iter", default_value_t = SolverConfig::default().max_iterations)]
        max_iter: usize,
        #[arg(long = "newton-tol", default_value_t = SolverConfig::default().newton_tolerance)]
        newton_tol: f64,
        /// Number of alpha-continuation stages from the classical problem.
        #[arg(long = "continuation", default_value_t = 0)]
        continuation: usize,
        /// Diagonal shift for the trajectory block of the Jacobian.
        #[arg(long = "regularization", default_value_t = 0.0)]
        regularization: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run the bundled oracle suite.
    Selftest {
        #[arg(long = "out", value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long = "inject-fault", value_enum, hide = true)]
        fault: Option<Fault>,
    },
}

fn load(common: &Common, multipliers: Option<Vec<f64>>) -> Result<Spec, Failure> {
    let text = std::fs::read_to_string(&common.spec)
        .map_err(|e| Failure::Spec(format!("cannot read {}: {e}", common.spec.display())))?;
    let overrides = Overrides {
        alpha: common.alpha,
        grid: common.grid,
        multipliers,
    };
    parse_spec(&text, &overrides).map_err(|e| Failure::Spec(format!("{}: {e}", common.spec.display())))
}

fn summarize(report: &RunReport) {
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{:<24} sup {:.3e}  tol {:.3e}  {verdict}", c.name, c.sup_norm, c.tolerance);
    }
    for c in &report.constraints {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("constraint {:<13} value {:.6e}  level {:.6e}  {verdict}", c.index, c.value, c.level);
    }
    if let Some(s) = &report.solver {
        println!(
            "solver: converged {} in {} iterations, Newton residual {:.3e}",
            s.converged, s.iterations, s.newton_residual
        );
        if let Some(d) = s.scaled_deviation {
            println!("scaled deviation from reference {d:.3e}");
        }
    }
    if !report.multipliers.is_empty() {
        let l: Vec<String> = report.multipliers.iter().map(|x| format!("{x:.9}")).collect();
        println!("multipliers: {}", l.join(", "));
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("status: {}", report.status);
}

fn emit(report: RunReport, out: &Path) -> Result<i32, Failure> {
    let sink = Sink::new(out)?;
    let path = sink.report(&report)?;
    summarize(&report);
    println!("report: {path}");
    Ok(report.exit_code)
}

fn selftest(out: Option<&Path>, fault: Option<Fault>) -> Result<i32, Failure> {
    let entries = selftest::run(fault);
    for e in &entries {
        let verdict = if e.passed { "PASS" } else { "FAIL" };
        println!("{:<28} {verdict}  {}", e.name, e.detail);
    }
    let passed = entries.iter().all(|e| e.passed);
    let code = if passed { EXIT_PASS } else { commands::EXIT_RESIDUAL };
    let report = RunReport {
        command: "selftest".into(),
        which: None,
        spec: None,
        alpha: None,
        grid: None,
        dim: None,
        multipliers: Vec::new(),
        tolerance: None,
        checks: Vec::new(),
        constraints: Vec::new(),
        boundary_residual: None,
        solver: None,
        selftest: Some(entries),
        warnings: Vec::new(),
        status: if passed { "pass" } else { "fail" }.into(),
        exit_code: code,
    };
    if let Some(dir) = out {
        println!("report: {}", Sink::new(dir)?.report(&report)?);
    }
    println!("status: {}", report.status);
    Ok(code)
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Check { which, lambda, common } => {
            let spec = load(&common, lambda)?;
            let report = commands::check(&spec, &common.spec.display().to_string(), which, common.tol, &common.out)?;
            emit(report, &common.out)
        }
        Command::Solve {
            max_iter,
            newton_tol,
            continuation,
            regularization,
            common,
        } => {
            let spec = load(&common, None)?;
            let config = SolverConfig {
                max_iterations: max_iter,
                newton_tolerance: newton_tol,
                continuation_steps: continuation,
                regularization,
                ..SolverConfig::default()
            };
            config.validate().map_err(|e| Failure::Spec(e.to_string()))?;
            let opts = SolveOptions { config, tol: common.tol };
            let report = commands::solve_spec(&spec, &common.spec.display().to_string(), &opts, &common.out)?;
            emit(report, &common.out)
        }
        Command::Selftest { out, fault } => selftest(out.as_deref(), fault),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                // invalid invocations share the exit code of invalid specs
                _ => ExitCode::from(EXIT_SPEC as u8),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
