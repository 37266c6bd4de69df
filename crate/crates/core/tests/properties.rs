use fracnoether::frac_kernels::{
    classical_derivative, left_rl_derivative, left_rl_integral, right_rl_derivative, right_rl_integral, FracOrder,
    Grid, SampledFunction,
};
use fracnoether::hamiltonian::{hamiltonian_value, ControlProblem, VectorField3};
use fracnoether::noether::{frac_pair_operator, momentum_law_residual, noether_law_residual, SymmetryGenerator};
use fracnoether::problems::{
    euler_lagrange_residual, variational_derivative, Multipliers, ScalarField3, VariationalProblem,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config() -> Config {
    Config {
        cases: 64,
        rng_seed: RngSeed::Fixed(0x00f2_ac7a),
        failure_persistence: None,
        ..Config::default()
    }
}

/// d + Σ a_k sin(w_k t + p_k) and its derivatives.
#[derive(Debug, Clone)]
struct Trig {
    d: f64,
    terms: Vec<(f64, f64, f64)>,
}

impl Trig {
    fn eval(&self, t: f64, derivative: i32) -> f64 {
        let base = if derivative == 0 { self.d } else { 0.0 };
        base + self
            .terms
            .iter()
            .map(|(a, w, p)| {
                let x = w * t + p;
                let s = match derivative.rem_euclid(4) {
                    0 => x.sin(),
                    1 => x.cos(),
                    2 => -x.sin(),
                    _ => -x.cos(),
                };
                a * w.powi(derivative) * s
            })
            .sum::<f64>()
    }

    fn sample(&self, grid: Grid) -> SampledFunction {
        SampledFunction::from_fn(grid, |t| self.eval(t, 0))
    }

    fn sup(&self, grid: Grid, derivative: i32) -> f64 {
        grid.nodes().map(|t| self.eval(t, derivative).abs()).fold(0.0, f64::max)
    }
}

fn trig() -> impl Strategy<Value = Trig> {
    (-1.0..1.0f64, prop::collection::vec((-1.0..1.0f64, 0.2..4.0f64, 0.0..6.3f64), 1..4))
        .prop_map(|(d, terms)| Trig { d, terms })
}

fn grid() -> impl Strategy<Value = Grid> {
    (-1.0..1.0f64, 0.5..3.0f64, 16..160usize).prop_map(|(a, len, m)| Grid::new(a, a + len, m).unwrap())
}

fn fractional_order() -> impl Strategy<Value = FracOrder> {
    (0.05..=1.0f64).prop_map(|a| FracOrder::new(a).unwrap())
}

fn agree(a: &SampledFunction, b: &SampledFunction, tol: f64) -> bool {
    a.values().iter().zip(b.values()).all(|(x, y)| {
        (x.is_nan() && y.is_nan()) || (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
    })
}

fn same_bits(a: &SampledFunction, b: &SampledFunction) -> bool {
    a.values()
        .iter()
        .zip(b.values())
        .all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
}

type Operator = fn(&SampledFunction, FracOrder) -> fracnoether::Result<SampledFunction>;

const OPERATORS: [Operator; 4] = [left_rl_integral, right_rl_integral, left_rl_derivative, right_rl_derivative];

proptest! {
    #![proptest_config(config())]

    #[test]
    fn operators_are_linear(g in grid(), alpha in fractional_order(), f in trig(), h in trig(),
                            x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let (f, h) = (f.sample(g), h.sample(g));
        let comb = f.lin_comb(x, &h, y).unwrap();
        for op in OPERATORS {
            let lhs = op(&comb, alpha).unwrap();
            let rhs = op(&f, alpha).unwrap().lin_comb(x, &op(&h, alpha).unwrap(), y).unwrap();
            prop_assert!(agree(&lhs, &rhs, 1e-12));
        }
    }

    #[test]
    fn pair_operator_is_bilinear(g in grid(), alpha in fractional_order(), f1 in trig(), f2 in trig(), h in trig(),
                                 x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let (f1, f2, h) = (f1.sample(g), f2.sample(g), h.sample(g));
        let comb = f1.lin_comb(x, &f2, y).unwrap();
        let first = frac_pair_operator(&comb, &h, alpha).unwrap();
        let first_split = frac_pair_operator(&f1, &h, alpha).unwrap()
            .lin_comb(x, &frac_pair_operator(&f2, &h, alpha).unwrap(), y).unwrap();
        prop_assert!(agree(&first, &first_split, 1e-12));
        let second = frac_pair_operator(&h, &comb, alpha).unwrap();
        let second_split = frac_pair_operator(&h, &f1, alpha).unwrap()
            .lin_comb(x, &frac_pair_operator(&h, &f2, alpha).unwrap(), y).unwrap();
        prop_assert!(agree(&second, &second_split, 1e-12));
    }

    #[test]
    fn unit_order_pair_operator_is_product_rule(a in -1.0..1.0f64, len in 0.5..2.0f64, f in trig(), h in trig()) {
        let g = Grid::new(a, a + len, 3000).unwrap();
        let (fs, hs) = (f.sample(g), h.sample(g));
        let pair = frac_pair_operator(&fs, &hs, FracOrder::new(1.0).unwrap()).unwrap();
        let product = classical_derivative(&fs.dot(&hs).unwrap());
        // leading difference of the two central-difference forms: h²/2·(f'h'' + f''h')
        let bound = g.h().powi(2) * (f.sup(g, 1) * h.sup(g, 2) + f.sup(g, 2) * h.sup(g, 1));
        let exact_bound = g.h().powi(2) / 6.0 * (f.sup(g, 3) * h.sup(g, 0) + f.sup(g, 0) * h.sup(g, 3));
        for i in 1..g.m() {
            prop_assert!((pair.value(i) - product.value(i)).abs() <= bound + 1e-12);
            let exact = f.eval(g.node(i), 1) * h.eval(g.node(i), 0) + f.eval(g.node(i), 0) * h.eval(g.node(i), 1);
            prop_assert!((pair.value(i) - exact).abs() <= 1.01 * exact_bound + 1e-9);
        }
    }

    #[test]
    fn right_operators_mirror_left(g in grid(), alpha in fractional_order(), f in trig()) {
        let f = f.sample(g);
        let right = right_rl_derivative(&f, alpha).unwrap();
        let mirrored = left_rl_derivative(&f.reflected(), alpha).unwrap().reflected();
        prop_assert!(same_bits(&right, &mirrored));
        let right = right_rl_integral(&f, alpha).unwrap();
        let mirrored = left_rl_integral(&f.reflected(), alpha).unwrap().reflected();
        prop_assert!(agree(&right, &mirrored, 1e-14));
    }

    #[test]
    fn time_free_generator_reduces_noether_to_momentum(g in grid(), alpha in fractional_order(), q in trig(),
                                                       lambda in -3.0..3.0f64, s in -2.0..2.0f64) {
        let lag = ScalarField3::new(1, 1, |t, q, v| q[0] * q[0] * t.cos() + v[0] * v[0] - q[0] * v[0]);
        let con = ScalarField3::new(1, 1, |_, q, v| (q[0] * v[0]).sin());
        let qs = q.sample(g);
        let problem = VariationalProblem::new(alpha, g, lag, vec![qs.value(0)], vec![qs.value(g.m())]).unwrap()
            .with_constraint(con, 0.0).unwrap();
        let mult = Multipliers::new(vec![lambda]).unwrap();
        let gen = SymmetryGenerator::new(1, |_, _| 0.0, move |t, q, out| out[0] = s * t * q[0] + 1.0);
        let full = noether_law_residual(&problem, &mult, &qs, &gen).unwrap();
        let momentum = momentum_law_residual(&problem, &mult, &qs, &gen).unwrap();
        prop_assert!(same_bits(&full.pointwise, &momentum.pointwise));
    }

    #[test]
    fn euler_lagrange_residual_is_affine_in_multipliers(g in grid(), alpha in fractional_order(), q in trig(),
                                                         l1 in -3.0..3.0f64, l2 in -3.0..3.0f64) {
        let lag = ScalarField3::new(1, 1, |t, q, v| t * q[0] * q[0] + v[0] * v[0])
            .with_partials(|t, q, _, o| o[0] = 2.0 * t * q[0], |_, _, v, o| o[0] = 2.0 * v[0]);
        let c1 = ScalarField3::new(1, 1, |_, q, v| q[0] * v[0])
            .with_partials(|_, _, v, o| o[0] = v[0], |_, q, _, o| o[0] = q[0]);
        let c2 = ScalarField3::new(1, 1, |t, q, _| t * q[0])
            .with_partials(|t, _, _, o| o[0] = t, |_, _, _, o| o[0] = 0.0);
        let qs = q.sample(g);
        let problem = VariationalProblem::new(alpha, g, lag.clone(), vec![qs.value(0)], vec![qs.value(g.m())]).unwrap()
            .with_constraint(c1.clone(), 0.0).unwrap()
            .with_constraint(c2.clone(), 0.0).unwrap();
        let r = euler_lagrange_residual(&problem, &Multipliers::new(vec![l1, l2]).unwrap(), &qs).unwrap();
        let base = variational_derivative(&lag, alpha, &qs).unwrap();
        let s1 = variational_derivative(&c1, alpha, &qs).unwrap();
        let s2 = variational_derivative(&c2, alpha, &qs).unwrap();
        let expected = base.lin_comb(1.0, &s1, -l1).unwrap().lin_comb(1.0, &s2, -l2).unwrap();
        prop_assert!(agree(&r.pointwise, &expected, 1e-11));
    }

    #[test]
    fn hamiltonian_is_affine_in_multipliers(t in 0.0..1.0f64, q in -2.0..2.0f64, u in -2.0..2.0f64,
                                            p in -2.0..2.0f64, l1 in -3.0..3.0f64, l2 in -3.0..3.0f64) {
        let g = Grid::new(0.0, 1.0, 10).unwrap();
        let lag = ScalarField3::new(1, 1, |t, q, u| t + q[0] * u[0] * u[0]);
        let phi = VectorField3::new(1, 1, 1, |t, q, u, out| out[0] = t * q[0] - u[0]);
        let cp = ControlProblem::new(FracOrder::new(0.5).unwrap(), g, lag.clone(), phi, vec![0.0]).unwrap()
            .with_constraint(ScalarField3::new(1, 1, |_, q, u| q[0] + u[0]), 0.0).unwrap()
            .with_constraint(ScalarField3::new(1, 1, |t, _, u| t * u[0].cos()), 0.0).unwrap();
        let h = |a: f64, b: f64| hamiltonian_value(&cp, t, &[q], &[u], &[p], &Multipliers::new(vec![a, b]).unwrap()).unwrap();
        let lhs = h(l1 + l2, l1 - l2) + h(0.0, 0.0);
        let rhs = h(l1, l1) + h(l2, -l2);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        let direct = lag.eval(t, &[q], &[u]) - l1 * (q + u) - l2 * t * u.cos() + p * (t * q - u);
        prop_assert!((h(l1, l2) - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
    }
}
