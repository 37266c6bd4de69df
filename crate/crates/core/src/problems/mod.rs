//! The fractional isoperimetric problem: minimize ∫ L(t, q, ₐD_t^α q) dt
//! subject to ∫ g_j(t, q, ₐD_t^α q) dt = l_j and q(a) = φ, q(b) = ψ.
//!
//! Candidate trajectories are checked against the Euler–Lagrange equation
//! of the augmented Lagrangian F = L − λ·g,
//!
//! ```text
//! ∂₂F(t, q, ₐD_t^α q) + ₜD_b^α ∂₃F(t, q, ₐD_t^α q) = 0.
//! ```

mod field;
mod report;

pub use field::{GradFn, ScalarField3, ValueFn, FD_STEP};
pub(crate) use field::fd_gradient;
pub use report::{certification_tolerance, ResidualReport, DEFAULT_BAND, DEFAULT_TOLERANCE_SCALE};

use crate::error::{Error, Result};
use crate::frac_kernels::{left_rl_derivative, right_rl_derivative, FracOrder, Grid, SampledFunction};

/// Lagrange multipliers λ ∈ R^k.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers(Vec<f64>);

impl Multipliers {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::Precondition("multipliers must be finite".into()));
        }
        Ok(Self(lambda))
    }

    pub fn zeros(k: usize) -> Self {
        Self(vec![0.0; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Data of the isoperimetric problem on a fixed grid.
#[derive(Debug, Clone)]
pub struct VariationalProblem {
    order: FracOrder,
    grid: Grid,
    lagrangian: ScalarField3,
    constraints: Vec<ScalarField3>,
    levels: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    band: usize,
}

impl VariationalProblem {
    /// Unconstrained problem; add constraints with [`Self::with_constraint`].
    pub fn new(
        order: FracOrder,
        grid: Grid,
        lagrangian: ScalarField3,
        left: Vec<f64>,
        right: Vec<f64>,
    ) -> Result<Self> {
        let n = left.len();
        if n == 0 || right.len() != n {
            return Err(Error::DimensionMismatch {
                what: "boundary values",
                expected: n,
                found: right.len(),
            });
        }
        check_field_dims(&lagrangian, n)?;
        Ok(Self {
            order,
            grid,
            lagrangian,
            constraints: Vec::new(),
            levels: Vec::new(),
            left,
            right,
            band: DEFAULT_BAND,
        })
    }

    pub fn with_constraint(mut self, g: ScalarField3, level: f64) -> Result<Self> {
        check_field_dims(&g, self.dim())?;
        self.constraints.push(g);
        self.levels.push(level);
        Ok(self)
    }

    pub fn with_band(mut self, band: usize) -> Self {
        self.band = band;
        self
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_order(mut self, order: FracOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_levels(mut self, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != self.constraints.len() {
            return Err(Error::DimensionMismatch {
                what: "constraint levels",
                expected: self.constraints.len(),
                found: levels.len(),
            });
        }
        self.levels = levels;
        Ok(self)
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn lagrangian(&self) -> &ScalarField3 {
        &self.lagrangian
    }

    pub fn constraints(&self) -> &[ScalarField3] {
        &self.constraints
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn left(&self) -> &[f64] {
        &self.left
    }

    pub fn right(&self) -> &[f64] {
        &self.right
    }

    pub fn band(&self) -> usize {
        self.band
    }

    /// State dimension n.
    pub fn dim(&self) -> usize {
        self.left.len()
    }

    /// Number of isoperimetric constraints k.
    pub fn k(&self) -> usize {
        self.constraints.len()
    }

    pub(crate) fn check_trajectory(&self, q: &SampledFunction) -> Result<()> {
        if *q.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if q.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "trajectory",
                expected: self.dim(),
                found: q.dim(),
            });
        }
        Ok(())
    }

    fn check_boundary(&self, q: &SampledFunction) -> Result<()> {
        let m = self.grid.m();
        for (end, node, target) in [("left", 0, &self.left), ("right", m, &self.right)] {
            for (x, y) in q.at(node).iter().zip(target.iter()) {
                if (x - y).abs() > 1e-6 * (1.0 + y.abs()) {
                    return Err(Error::Precondition(format!(
                        "trajectory misses the {end} boundary value: {x} vs {y}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_field_dims(f: &ScalarField3, n: usize) -> Result<()> {
    if f.dim_x() != n || f.dim_y() != n {
        return Err(Error::DimensionMismatch {
            what: "field arguments",
            expected: n,
            found: if f.dim_x() != n { f.dim_x() } else { f.dim_y() },
        });
    }
    Ok(())
}

/// ₐD_t^α q, component-wise.
pub fn frac_velocity(q: &SampledFunction, order: FracOrder) -> Result<SampledFunction> {
    left_rl_derivative(q, order)
}

/// F = L − Σ λ_j g_j.
pub fn augmented_lagrangian(problem: &VariationalProblem, mult: &Multipliers) -> Result<ScalarField3> {
    if mult.len() != problem.k() {
        return Err(Error::DimensionMismatch {
            what: "multipliers",
            expected: problem.k(),
            found: mult.len(),
        });
    }
    let mut terms = vec![(1.0, problem.lagrangian.clone())];
    terms.extend(
        mult.as_slice()
            .iter()
            .zip(&problem.constraints)
            .map(|(l, g)| (-l, g.clone())),
    );
    ScalarField3::linear_combination(&terms)
}

fn singular_at(i: usize, a: &SampledFunction, b: &SampledFunction) -> bool {
    a.is_singular_node(i) || b.is_singular_node(i)
}

/// f(t_i, x_i, y_i) at every node; NaN where either argument is singular.
pub fn sample_field(field: &ScalarField3, x: &SampledFunction, y: &SampledFunction) -> Result<SampledFunction> {
    if x.grid() != y.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *x.grid();
    let values: Vec<f64> = (0..grid.len())
        .map(|i| {
            if singular_at(i, x, y) {
                f64::NAN
            } else {
                field.eval(grid.node(i), x.at(i), y.at(i))
            }
        })
        .collect();
    Ok(SampledFunction::from_raw(
        grid,
        1,
        values,
        singular_at(0, x, y),
        singular_at(grid.m(), x, y),
    ))
}

/// (∂₂f, ∂₃f) sampled along (x, y).
pub fn sample_partials(
    field: &ScalarField3,
    x: &SampledFunction,
    y: &SampledFunction,
) -> Result<(SampledFunction, SampledFunction)> {
    if x.grid() != y.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *x.grid();
    let (dx, dy) = (field.dim_x(), field.dim_y());
    let mut gx = vec![0.0; grid.len() * dx];
    let mut gy = vec![0.0; grid.len() * dy];
    for i in 0..grid.len() {
        let ox = &mut gx[i * dx..(i + 1) * dx];
        let oy = &mut gy[i * dy..(i + 1) * dy];
        if singular_at(i, x, y) {
            ox.fill(f64::NAN);
            oy.fill(f64::NAN);
            continue;
        }
        let t = grid.node(i);
        field.grad_x(t, x.at(i), y.at(i), ox);
        field.grad_y(t, x.at(i), y.at(i), oy);
        if ox.iter().chain(oy.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples(format!(
                "partial derivatives are not finite at t = {t}"
            )));
        }
    }
    let (l, r) = (singular_at(0, x, y), singular_at(grid.m(), x, y));
    Ok((
        SampledFunction::from_raw(grid, dx, gx, l, r),
        SampledFunction::from_raw(grid, dy, gy, l, r),
    ))
}

/// ∂₂f + ₜD_b^α ∂₃f along q: the Euler–Lagrange expression of a single
/// integrand.
pub fn variational_derivative(field: &ScalarField3, order: FracOrder, q: &SampledFunction) -> Result<SampledFunction> {
    let v = frac_velocity(q, order)?;
    let (dq, dv) = sample_partials(field, q, &v)?;
    let transported = right_rl_derivative(&dv, order)?;
    dq.lin_comb(1.0, &transported, 1.0)
}

/// ∫_a^b g_j(t, q, ₐD_t^α q) dt for every constraint, by the trapezoid rule
/// with the singular endpoint velocity extrapolated.
pub fn constraint_values(problem: &VariationalProblem, q: &SampledFunction) -> Result<Vec<f64>> {
    problem.check_trajectory(q)?;
    problem.check_boundary(q)?;
    let v = frac_velocity(q, problem.order)?.fill_singular();
    problem
        .constraints
        .iter()
        .map(|g| Ok(sample_field(g, q, &v)?.trapezoid()[0]))
        .collect()
}

/// ∫_a^b L(t, q, ₐD_t^α q) dt.
pub fn objective_value(problem: &VariationalProblem, q: &SampledFunction) -> Result<f64> {
    problem.check_trajectory(q)?;
    problem.check_boundary(q)?;
    let v = frac_velocity(q, problem.order)?.fill_singular();
    Ok(sample_field(&problem.lagrangian, q, &v)?.trapezoid()[0])
}

/// Residual of the fractional isoperimetric Euler–Lagrange equation.
pub fn euler_lagrange_residual(
    problem: &VariationalProblem,
    mult: &Multipliers,
    q: &SampledFunction,
) -> Result<ResidualReport> {
    problem.check_trajectory(q)?;
    problem.check_boundary(q)?;
    let f = augmented_lagrangian(problem, mult)?;
    let r = variational_derivative(&f, problem.order, q)?;
    Ok(ResidualReport::new(r, problem.band))
}

/// Outcome of the normality test for one constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Normality {
    pub report: ResidualReport,
    pub tolerance: f64,
    /// True when g_j itself satisfies its Euler–Lagrange equation along q.
    pub abnormal: bool,
}

/// Evaluates ∂₂g_j + ₜD_b^α ∂₃g_j along q. The trajectory is abnormal for
/// constraint j when this vanishes within the certification tolerance.
pub fn normality_check(problem: &VariationalProblem, q: &SampledFunction, j: usize) -> Result<Normality> {
    problem.check_trajectory(q)?;
    let g = problem.constraints.get(j).ok_or(Error::IndexOutOfRange {
        index: j,
        len: problem.k(),
    })?;
    let r = variational_derivative(g, problem.order, q)?;
    let report = ResidualReport::new(r, problem.band);
    let tolerance = certification_tolerance(&problem.grid, problem.order, DEFAULT_TOLERANCE_SCALE);
    let abnormal = report.passes(tolerance);
    Ok(Normality {
        report,
        tolerance,
        abnormal,
    })
}
