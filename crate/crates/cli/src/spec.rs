//! Problem specification files (TOML). See docs/formats.md for the schema.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;
use toml::Spanned;

use fracnoether::frac_kernels::{gamma, FracOrder, Grid, SampledFunction};
use fracnoether::hamiltonian::{ControlProblem, ControlSymmetry, VectorField3};
use fracnoether::noether::SymmetryGenerator;
use fracnoether::problems::{ScalarField3, VariationalProblem, DEFAULT_BAND};

use crate::expr::{eval_constant, Expr, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecErrorKind {
    Parse,
    Dimension,
    UnknownVariable,
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub kind: SpecErrorKind,
    /// 1-based line in the spec file, when known.
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SpecErrorKind::Parse => "parse error",
            SpecErrorKind::Dimension => "dimension error",
            SpecErrorKind::UnknownVariable => "unknown variable",
            SpecErrorKind::Invalid => "invalid value",
        };
        match self.line {
            Some(l) => write!(f, "{kind} at line {l}, key '{}': {}", self.key, self.message),
            None => write!(f, "{kind}, key '{}': {}", self.key, self.message),
        }
    }
}

impl std::error::Error for SpecError {}

/// Command-line overrides applied before the spec is evaluated.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub grid: Option<usize>,
    pub multipliers: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Number(f64),
    Expr(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    alpha: Spanned<Num>,
    interval: Spanned<Vec<Spanned<Num>>>,
    grid: Spanned<i64>,
    band: Option<Spanned<i64>>,
    lagrangian: Spanned<String>,
    #[serde(default)]
    constraints: Vec<Spanned<String>>,
    #[serde(default)]
    levels: Vec<Spanned<Num>>,
    multipliers: Option<Spanned<Vec<Spanned<Num>>>>,
    #[serde(default)]
    constants: BTreeMap<String, Spanned<Num>>,
    boundary: Option<Spanned<RawBoundary>>,
    control: Option<Spanned<RawControl>>,
    symmetry: Option<Spanned<RawSymmetry>>,
    trajectory: Option<Spanned<RawTrajectory>>,
    reference: Option<Spanned<RawTrajectory>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundary {
    left: Vec<Spanned<Num>>,
    right: Vec<Spanned<Num>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawControl {
    controls: Spanned<i64>,
    dynamics: Vec<Spanned<String>>,
    initial: Vec<Spanned<Num>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymmetry {
    tau: Option<Spanned<String>>,
    xi: Option<Vec<Spanned<String>>>,
    rho: Option<Vec<Spanned<String>>>,
    sigma: Option<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrajectory {
    q: Option<Vec<Spanned<String>>>,
    samples: Option<Spanned<Vec<Vec<f64>>>>,
    builtin: Option<Spanned<String>>,
    u: Option<Vec<Spanned<String>>>,
    p: Option<Vec<Spanned<String>>>,
}

/// Trajectories that can be named instead of written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// 2 (t−a)^{α+2} / Γ(3+α), the extremal of the bundled example 1.
    Example1,
}

#[derive(Debug, Clone)]
pub enum Source {
    Exprs(Vec<Expr>),
    Samples(Vec<Vec<f64>>),
    Builtin(Builtin),
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub q: Source,
    /// Control and costate, control mode only.
    pub u: Option<Vec<Expr>>,
    pub p: Option<Vec<Expr>>,
}

#[derive(Debug, Clone)]
pub struct Symmetry {
    pub tau: Expr,
    pub xi: Vec<Expr>,
    pub rho: Vec<Expr>,
    pub sigma: Vec<Expr>,
}

#[derive(Debug, Clone)]
pub enum Mode {
    Variational { left: Vec<f64>, right: Vec<f64> },
    Control { controls: usize, dynamics: Vec<Expr>, initial: Vec<f64> },
}

/// A validated problem specification.
#[derive(Debug, Clone)]
pub struct Spec {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub m: usize,
    pub band: usize,
    pub n: usize,
    pub mode: Mode,
    pub lagrangian: Expr,
    pub constraints: Vec<Expr>,
    pub levels: Vec<f64>,
    pub multipliers: Option<Vec<f64>>,
    pub symmetry: Option<Symmetry>,
    pub trajectory: Option<Candidate>,
    pub reference: Option<Source>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, kind: SpecErrorKind, key: &str, span: std::ops::Range<usize>, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError {
            kind,
            line: Some(self.line(span.start)),
            key: key.to_string(),
            message: message.into(),
        })
    }

    fn expr(&self, key: &str, s: &Spanned<String>, scope: &Scope) -> Result<Expr, SpecError> {
        Expr::parse(s.get_ref(), scope).or_else(|e| {
            let kind = if e.message.starts_with("unknown variable") {
                SpecErrorKind::UnknownVariable
            } else {
                SpecErrorKind::Parse
            };
            self.err(kind, key, s.span(), format!("{e} in \"{}\"", s.get_ref()))
        })
    }

    fn exprs(&self, key: &str, list: &[Spanned<String>], scope: &Scope) -> Result<Vec<Expr>, SpecError> {
        list.iter()
            .enumerate()
            .map(|(i, s)| self.expr(&format!("{key}[{i}]"), s, scope))
            .collect()
    }

    fn num(&self, key: &str, v: &Spanned<Num>, scope: &Scope) -> Result<f64, SpecError> {
        let x = match v.get_ref() {
            Num::Number(x) => *x,
            Num::Expr(s) => eval_constant(s, scope).or_else(|e| {
                let kind = if e.message.starts_with("unknown variable") {
                    SpecErrorKind::UnknownVariable
                } else {
                    SpecErrorKind::Parse
                };
                self.err(kind, key, v.span(), format!("{e} in \"{s}\""))
            })?,
        };
        if !x.is_finite() {
            return self.err(SpecErrorKind::Invalid, key, v.span(), "value is not finite");
        }
        Ok(x)
    }

    fn nums(&self, key: &str, list: &[Spanned<Num>], scope: &Scope) -> Result<Vec<f64>, SpecError> {
        list.iter()
            .enumerate()
            .map(|(i, v)| self.num(&format!("{key}[{i}]"), v, scope))
            .collect()
    }

    fn count(&self, key: &str, span: std::ops::Range<usize>, expected: usize, found: usize) -> Result<(), SpecError> {
        if expected != found {
            return self.err(
                SpecErrorKind::Dimension,
                key,
                span,
                format!("expected {expected} entries, found {found}"),
            );
        }
        Ok(())
    }
}

fn list_span<T>(list: &[Spanned<T>], fallback: std::ops::Range<usize>) -> std::ops::Range<usize> {
    list.first().map(|s| s.span()).unwrap_or(fallback)
}

fn indexed(prefix: &str, count: usize) -> impl Iterator<Item = String> + '_ {
    (1..=count).map(move |i| format!("{prefix}{i}"))
}

/// Scope with t in slot 0 followed by the named vector blocks.
fn slot_scope(constants: &Scope, blocks: &[(&str, usize)]) -> Scope {
    let mut scope = constants.clone().slot("t", 0);
    let mut next = 1;
    for (prefix, count) in blocks {
        for name in indexed(prefix, *count) {
            scope = scope.slot(name, next);
            next += 1;
        }
    }
    scope
}

/// Resolves user constants in dependency order.
fn resolve_constants(ctx: &Ctx<'_>, raw: &BTreeMap<String, Spanned<Num>>, scope: &mut Scope) -> Result<(), SpecError> {
    for name in raw.keys() {
        if scope.has(name) || ["t", "gamma"].contains(&name.as_str()) {
            let span = raw[name].span();
            return ctx.err(SpecErrorKind::Invalid, &format!("constants.{name}"), span, "name is reserved");
        }
    }
    let mut pending: Vec<&String> = raw.keys().collect();
    while !pending.is_empty() {
        let before = pending.len();
        let mut failed = None;
        pending.retain(|name| {
            let key = format!("constants.{name}");
            match ctx.num(&key, &raw[*name], scope) {
                Ok(v) => {
                    scope.set_constant(name.as_str(), v);
                    false
                }
                Err(e) => {
                    failed = Some(e);
                    true
                }
            }
        });
        if pending.len() == before {
            return Err(failed.expect("a pending constant failed"));
        }
    }
    Ok(())
}

/// Parses and validates a spec document.
pub fn parse_spec(text: &str, overrides: &Overrides) -> Result<Spec, SpecError> {
    let ctx = Ctx { text };
    if text.trim().is_empty() {
        return Err(SpecError {
            kind: SpecErrorKind::Parse,
            line: None,
            key: String::new(),
            message: "empty specification".into(),
        });
    }
    let raw: RawSpec = toml::from_str(text).map_err(|e| SpecError {
        kind: SpecErrorKind::Parse,
        line: e.span().map(|s| ctx.line(s.start)),
        key: String::new(),
        message: e.message().to_string(),
    })?;

    let mut scope = Scope::new();
    let alpha = match overrides.alpha {
        Some(a) => a,
        None => ctx.num("alpha", &raw.alpha, &scope)?,
    };
    if !(alpha > 0.0 && alpha <= 1.0) {
        return ctx.err(SpecErrorKind::Invalid, "alpha", raw.alpha.span(), format!("alpha = {alpha} must lie in (0, 1]"));
    }
    ctx.count("interval", raw.interval.span(), 2, raw.interval.get_ref().len())?;
    let a = ctx.num("interval[0]", &raw.interval.get_ref()[0], &scope)?;
    let b = ctx.num("interval[1]", &raw.interval.get_ref()[1], &scope)?;
    if b <= a {
        return ctx.err(SpecErrorKind::Invalid, "interval", raw.interval.span(), "need a < b");
    }
    let m = match overrides.grid {
        Some(m) => m as i64,
        None => *raw.grid.get_ref(),
    };
    if m < 2 {
        return ctx.err(SpecErrorKind::Invalid, "grid", raw.grid.span(), "grid needs at least 2 intervals");
    }
    let m = m as usize;
    let band = match &raw.band {
        Some(b) if *b.get_ref() < 0 => return ctx.err(SpecErrorKind::Invalid, "band", b.span(), "band must be >= 0"),
        Some(b) => *b.get_ref() as usize,
        None => DEFAULT_BAND,
    };
    scope.set_constant("alpha", alpha);
    scope.set_constant("a", a);
    scope.set_constant("b", b);
    resolve_constants(&ctx, &raw.constants, &mut scope)?;

    let whole = 0..text.len();
    let (mode, n, field_scope, gen_scope) = match (&raw.boundary, &raw.control) {
        (Some(_), Some(c)) => {
            return ctx.err(SpecErrorKind::Invalid, "control", c.span(), "give either [boundary] or [control], not both")
        }
        (None, None) => {
            return ctx.err(SpecErrorKind::Invalid, "boundary", whole, "missing [boundary] (or [control]) table")
        }
        (Some(bd), None) => {
            let left = ctx.nums("boundary.left", &bd.get_ref().left, &scope)?;
            let right = ctx.nums("boundary.right", &bd.get_ref().right, &scope)?;
            if left.is_empty() {
                return ctx.err(SpecErrorKind::Dimension, "boundary.left", bd.span(), "at least one component");
            }
            ctx.count("boundary.right", list_span(&bd.get_ref().right, bd.span()), left.len(), right.len())?;
            let n = left.len();
            let fs = slot_scope(&scope, &[("q", n), ("v", n)]);
            let gs = slot_scope(&scope, &[("q", n)]);
            (Mode::Variational { left, right }, n, fs, gs)
        }
        (None, Some(c)) => {
            let rc = c.get_ref();
            let initial = ctx.nums("control.initial", &rc.initial, &scope)?;
            let n = initial.len();
            if n == 0 {
                return ctx.err(SpecErrorKind::Dimension, "control.initial", c.span(), "at least one component");
            }
            let controls = *rc.controls.get_ref();
            if controls < 1 {
                return ctx.err(SpecErrorKind::Invalid, "control.controls", rc.controls.span(), "need at least one control");
            }
            let controls = controls as usize;
            let fs = slot_scope(&scope, &[("q", n), ("u", controls)]);
            let gs = slot_scope(&scope, &[("q", n), ("u", controls), ("p", n)]);
            ctx.count("control.dynamics", list_span(&rc.dynamics, c.span()), n, rc.dynamics.len())?;
            let dynamics = ctx.exprs("control.dynamics", &rc.dynamics, &fs)?;
            (Mode::Control { controls, dynamics, initial }, n, fs, gs)
        }
    };

    let lagrangian = ctx.expr("lagrangian", &raw.lagrangian, &field_scope)?;
    let constraints = ctx.exprs("constraints", &raw.constraints, &field_scope)?;
    let levels = ctx.nums("levels", &raw.levels, &scope)?;
    ctx.count(
        "levels",
        list_span(&raw.levels, list_span(&raw.constraints, whole.clone())),
        constraints.len(),
        levels.len(),
    )?;
    let multipliers = match (&overrides.multipliers, &raw.multipliers) {
        (Some(l), _) => {
            if l.len() != constraints.len() {
                return Err(SpecError {
                    kind: SpecErrorKind::Dimension,
                    line: None,
                    key: "--lambda".into(),
                    message: format!("expected {} multipliers, found {}", constraints.len(), l.len()),
                });
            }
            Some(l.clone())
        }
        (None, Some(ms)) => {
            let v = ctx.nums("multipliers", ms.get_ref(), &scope)?;
            ctx.count("multipliers", ms.span(), constraints.len(), v.len())?;
            Some(v)
        }
        (None, None) => None,
    };

    let controls = match &mode {
        Mode::Control { controls, .. } => Some(*controls),
        Mode::Variational { .. } => None,
    };
    let symmetry = match &raw.symmetry {
        None => None,
        Some(s) => {
            let rs = s.get_ref();
            let zero = |k: usize| vec![Expr::parse("0", &Scope::new()).expect("literal parses"); k];
            let tau = match &rs.tau {
                Some(t) => ctx.expr("symmetry.tau", t, &gen_scope)?,
                None => zero(1).remove(0),
            };
            let vector = |key: &str, list: &Option<Vec<Spanned<String>>>, k: usize| -> Result<Vec<Expr>, SpecError> {
                match list {
                    None => Ok(zero(k)),
                    Some(l) => {
                        ctx.count(key, list_span(l, s.span()), k, l.len())?;
                        ctx.exprs(key, l, &gen_scope)
                    }
                }
            };
            let xi = vector("symmetry.xi", &rs.xi, n)?;
            let (rho, sigma) = match controls {
                Some(mc) => (vector("symmetry.rho", &rs.rho, mc)?, vector("symmetry.sigma", &rs.sigma, n)?),
                None => {
                    if rs.rho.is_some() || rs.sigma.is_some() {
                        return ctx.err(
                            SpecErrorKind::Invalid,
                            "symmetry",
                            s.span(),
                            "rho and sigma apply to control specs only",
                        );
                    }
                    (Vec::new(), Vec::new())
                }
            };
            Some(Symmetry { tau, xi, rho, sigma })
        }
    };

    let time_scope = slot_scope(&scope, &[]);
    let source = |key: &str, t: &Spanned<RawTrajectory>| -> Result<Source, SpecError> {
        let rt = t.get_ref();
        let given = [rt.q.is_some(), rt.samples.is_some(), rt.builtin.is_some()];
        if given.iter().filter(|g| **g).count() != 1 {
            return ctx.err(SpecErrorKind::Invalid, key, t.span(), "give exactly one of q, samples or builtin");
        }
        if let Some(q) = &rt.q {
            ctx.count(&format!("{key}.q"), list_span(q, t.span()), n, q.len())?;
            return Ok(Source::Exprs(ctx.exprs(&format!("{key}.q"), q, &time_scope)?));
        }
        if let Some(s) = &rt.samples {
            let rows = s.get_ref();
            ctx.count(&format!("{key}.samples"), s.span(), n, rows.len())?;
            for row in rows {
                ctx.count(&format!("{key}.samples"), s.span(), m + 1, row.len())?;
            }
            return Ok(Source::Samples(rows.clone()));
        }
        let name = rt.builtin.as_ref().expect("one source is present");
        match name.get_ref().as_str() {
            "example1" if n == 1 => Ok(Source::Builtin(Builtin::Example1)),
            "example1" => ctx.err(SpecErrorKind::Dimension, &format!("{key}.builtin"), name.span(), "example1 is scalar"),
            other => ctx.err(
                SpecErrorKind::Invalid,
                &format!("{key}.builtin"),
                name.span(),
                format!("unknown builtin '{other}'"),
            ),
        }
    };
    let trajectory = match &raw.trajectory {
        None => None,
        Some(t) => {
            let rt = t.get_ref();
            let q = source("trajectory", t)?;
            let vector = |key: &str, list: &Option<Vec<Spanned<String>>>, k: usize| -> Result<Option<Vec<Expr>>, SpecError> {
                match list {
                    None => Ok(None),
                    Some(_) if controls.is_none() => {
                        ctx.err(SpecErrorKind::Invalid, key, t.span(), "u and p apply to control specs only")
                    }
                    Some(l) => {
                        ctx.count(key, list_span(l, t.span()), k, l.len())?;
                        Ok(Some(ctx.exprs(key, l, &time_scope)?))
                    }
                }
            };
            let u = vector("trajectory.u", &rt.u, controls.unwrap_or(0))?;
            let p = vector("trajectory.p", &rt.p, n)?;
            Some(Candidate { q, u, p })
        }
    };
    let reference = match &raw.reference {
        None => None,
        Some(r) => {
            if r.get_ref().u.is_some() || r.get_ref().p.is_some() {
                return ctx.err(SpecErrorKind::Invalid, "reference", r.span(), "a reference holds q only");
            }
            Some(source("reference", r)?)
        }
    };

    Ok(Spec {
        alpha,
        a,
        b,
        m,
        band,
        n,
        mode,
        lagrangian,
        constraints,
        levels,
        multipliers,
        symmetry,
        trajectory,
        reference,
    })
}

/// Evaluates a list of expressions at slots, writing into out.
fn eval_into(exprs: &[Expr], slots: &[f64], out: &mut [f64]) {
    for (o, e) in out.iter_mut().zip(exprs) {
        *o = e.eval(slots);
    }
}

fn pack(t: f64, blocks: &[&[f64]]) -> Vec<f64> {
    let mut slots = Vec::with_capacity(1 + blocks.iter().map(|b| b.len()).sum::<usize>());
    slots.push(t);
    for b in blocks {
        slots.extend_from_slice(b);
    }
    slots
}

fn field(expr: &Expr, dim_x: usize, dim_y: usize) -> ScalarField3 {
    let e = Arc::new(expr.clone());
    ScalarField3::new(dim_x, dim_y, move |t, x, y| e.eval(&pack(t, &[x, y])))
}

impl Spec {
    pub fn order(&self) -> FracOrder {
        FracOrder::new(self.alpha).expect("alpha validated at parse time")
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.a, self.b, self.m).expect("interval validated at parse time")
    }

    pub fn k(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_control(&self) -> bool {
        matches!(self.mode, Mode::Control { .. })
    }

    pub fn variational_problem(&self) -> fracnoether::Result<VariationalProblem> {
        let Mode::Variational { left, right } = &self.mode else {
            return Err(fracnoether::Error::Precondition("spec is in control form".into()));
        };
        let n = self.n;
        let mut p = VariationalProblem::new(
            self.order(),
            self.grid(),
            field(&self.lagrangian, n, n),
            left.clone(),
            right.clone(),
        )?
        .with_band(self.band);
        for (g, l) in self.constraints.iter().zip(&self.levels) {
            p = p.with_constraint(field(g, n, n), *l)?;
        }
        Ok(p)
    }

    pub fn control_problem(&self) -> fracnoether::Result<ControlProblem> {
        let Mode::Control { controls, dynamics, initial } = &self.mode else {
            return ControlProblem::from_variational(&self.variational_problem()?);
        };
        let (n, mc) = (self.n, *controls);
        let phi = Arc::new(dynamics.clone());
        let dynamics = VectorField3::new(n, mc, n, move |t, q, u, out| eval_into(&phi, &pack(t, &[q, u]), out));
        let mut cp = ControlProblem::new(self.order(), self.grid(), field(&self.lagrangian, n, mc), dynamics, initial.clone())?
            .with_band(self.band);
        for (g, l) in self.constraints.iter().zip(&self.levels) {
            cp = cp.with_constraint(field(g, n, mc), *l)?;
        }
        Ok(cp)
    }

    pub fn generator(&self) -> Option<SymmetryGenerator> {
        let s = self.symmetry.as_ref()?;
        let (tau, xi) = (Arc::new(s.tau.clone()), Arc::new(s.xi.clone()));
        Some(SymmetryGenerator::new(
            self.n,
            move |t, q| tau.eval(&pack(t, &[q])),
            move |t, q, out| eval_into(&xi, &pack(t, &[q]), out),
        ))
    }

    /// Control symmetry. For variational specs ϱ = ς = 0 and τ, ξ see (t, q).
    pub fn control_symmetry(&self) -> Option<ControlSymmetry> {
        let s = self.symmetry.as_ref()?;
        let n = self.n;
        let (tau, xi) = (Arc::new(s.tau.clone()), Arc::new(s.xi.clone()));
        match &self.mode {
            Mode::Variational { .. } => Some(ControlSymmetry::new(
                n,
                n,
                move |t, q, _, _| tau.eval(&pack(t, &[q])),
                move |t, q, _, _, out| eval_into(&xi, &pack(t, &[q]), out),
                |_, _, _, _, out| out.fill(0.0),
                |_, _, _, _, out| out.fill(0.0),
            )),
            Mode::Control { controls, .. } => {
                let (rho, sigma) = (Arc::new(s.rho.clone()), Arc::new(s.sigma.clone()));
                Some(ControlSymmetry::new(
                    n,
                    *controls,
                    move |t, q, u, p| tau.eval(&pack(t, &[q, u, p])),
                    move |t, q, u, p, out| eval_into(&xi, &pack(t, &[q, u, p]), out),
                    move |t, q, u, p, out| eval_into(&rho, &pack(t, &[q, u, p]), out),
                    move |t, q, u, p, out| eval_into(&sigma, &pack(t, &[q, u, p]), out),
                ))
            }
        }
    }

    pub fn sample(&self, source: &Source) -> fracnoether::Result<SampledFunction> {
        let grid = self.grid();
        match source {
            Source::Exprs(exprs) => Ok(sample_exprs(grid, exprs)),
            Source::Samples(rows) => {
                let mut values = vec![0.0; grid.len() * self.n];
                for (c, row) in rows.iter().enumerate() {
                    if row.len() != grid.len() {
                        return Err(fracnoether::Error::DimensionMismatch {
                            what: "trajectory samples",
                            expected: grid.len(),
                            found: row.len(),
                        });
                    }
                    for (i, v) in row.iter().enumerate() {
                        values[i * self.n + c] = *v;
                    }
                }
                SampledFunction::new(grid, self.n, values)
            }
            Source::Builtin(Builtin::Example1) => {
                let c = 2.0 / gamma(3.0 + self.alpha)?;
                let (a, alpha) = (self.a, self.alpha);
                Ok(SampledFunction::from_fn(grid, move |t| c * (t - a).powf(alpha + 2.0)))
            }
        }
    }
}

/// Samples t-only expressions on the grid, one component each.
pub fn sample_exprs(grid: Grid, exprs: &[Expr]) -> SampledFunction {
    SampledFunction::from_vec_fn(grid, exprs.len(), |t, out| eval_into(exprs, &[t], out))
}
