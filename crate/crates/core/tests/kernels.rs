use fracnoether::frac_kernels::{
    closed_form_left_derivative, gamma, left_rl_derivative, left_rl_derivative_with, left_rl_integral,
    recip_gamma, right_rl_derivative, right_rl_integral, ClosedFormAtom, FracOrder, Grid, SampledFunction, Scheme,
};
use fracnoether::Error;

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

/// Composite Simpson on [0, upper] with `panels` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, upper: f64, panels: usize) -> f64 {
    let h = upper / panels as f64;
    let mut s = f(0.0) + f(upper);
    for i in 1..panels {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

/// Left RL integral by the substitution u = (t − θ)^α, which removes the
/// kernel singularity: ₐI_t^α f = 1/Γ(α+1) ∫_0^{(t−a)^α} f(t − u^{1/α}) du.
fn left_integral_oracle(f: impl Fn(f64) -> f64, alpha: f64, a: f64, t: f64) -> f64 {
    simpson(|u| f(t - u.powf(1.0 / alpha)), (t - a).powf(alpha), 4000) / statrs::function::gamma::gamma(alpha + 1.0)
}

fn right_integral_oracle(f: impl Fn(f64) -> f64, alpha: f64, b: f64, t: f64) -> f64 {
    simpson(|u| f(t + u.powf(1.0 / alpha)), (b - t).powf(alpha), 4000) / statrs::function::gamma::gamma(alpha + 1.0)
}

#[test]
fn gamma_matches_independent_implementation() {
    let mut x: f64 = -4.75;
    while x < 12.0 {
        if (x - x.round()).abs() > 1e-9 || x > 0.0 {
            let ours = gamma(x).unwrap();
            let theirs = statrs::function::gamma::gamma(x);
            assert!((ours - theirs).abs() <= 1e-12 * theirs.abs(), "x = {x}: {ours} vs {theirs}");
            assert!((recip_gamma(x) * theirs - 1.0).abs() < 1e-12);
        }
        x += 0.125;
    }
    assert!((gamma(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-15);
    assert_eq!(gamma(1.0).unwrap(), 1.0);
    assert!((gamma(3.0).unwrap() - 2.0).abs() < 1e-15);
    for pole in [0.0, -1.0, -2.0, -7.0] {
        assert!(matches!(gamma(pole), Err(Error::Pole(_))));
        assert_eq!(recip_gamma(pole), 0.0);
    }
}

#[test]
fn integral_power_rule() {
    // ₐI_t^{1/2}(t − a) = Γ(2)/Γ(2.5)·(t − a)^{1.5}
    let grid = Grid::new(-0.5, 1.5, 400).unwrap();
    let f = SampledFunction::from_fn(grid, |t| t + 0.5);
    let i = left_rl_integral(&f, order(0.5)).unwrap();
    let c = 1.0 / statrs::function::gamma::gamma(2.5);
    for (k, t) in grid.nodes().enumerate() {
        assert!((i.value(k) - c * (t + 0.5).powf(1.5)).abs() < 1e-13, "node {k}");
    }
}

#[test]
fn integrals_match_quadrature_oracle() {
    let f = |t: f64| (2.0 * t).sin() + t * t;
    let grid = Grid::new(0.0, 2.0, 1000).unwrap();
    let samples = SampledFunction::from_fn(grid, f);
    for alpha in [0.2, 0.5, 0.8, 1.0, 1.7] {
        let left = left_rl_integral(&samples, order(alpha)).unwrap();
        let right = right_rl_integral(&samples, order(alpha)).unwrap();
        for k in [1, 100, 500, 999] {
            let t = grid.node(k);
            let l = left_integral_oracle(f, alpha, 0.0, t);
            let r = right_integral_oracle(f, alpha, 2.0, t);
            assert!((left.value(k) - l).abs() < 1e-5, "left alpha {alpha} node {k}: {} vs {l}", left.value(k));
            assert!((right.value(k) - r).abs() < 1e-5, "right alpha {alpha} node {k}: {} vs {r}", right.value(k));
        }
    }
}

#[test]
fn integer_order_integral_of_one() {
    let grid = Grid::new(1.0, 4.0, 30).unwrap();
    let one = SampledFunction::from_fn(grid, |_| 1.0);
    let left = left_rl_integral(&one, order(1.0)).unwrap();
    let right = right_rl_integral(&one, order(1.0)).unwrap();
    assert!((left.value(30) - 3.0).abs() < 1e-13);
    assert!((right.value(0) - 3.0).abs() < 1e-13);
    let zero = SampledFunction::zeros(grid, 1);
    assert!(left_rl_integral(&zero, order(0.3)).unwrap().values().iter().all(|v| *v == 0.0));
}

#[test]
fn right_integral_is_mirrored_left_integral() {
    let grid = Grid::new(0.3, 2.1, 157).unwrap();
    let f = SampledFunction::from_fn(grid, |t| t.exp() * (3.0 * t).cos());
    for alpha in [0.25, 0.5, 1.5] {
        let right = right_rl_integral(&f, order(alpha)).unwrap();
        let mirrored = left_rl_integral(&f.reflected(), order(alpha)).unwrap().reflected();
        assert!(right.max_abs_diff(&mirrored, 0..grid.len()) < 1e-14);
    }
}

fn power_rule_error(alpha: f64, upsilon: f64, m: usize) -> f64 {
    let grid = Grid::new(0.0, 1.0, m).unwrap();
    let f = SampledFunction::from_fn(grid, |t| t.powf(upsilon));
    let d = left_rl_derivative(&f, order(alpha)).unwrap();
    let g = statrs::function::gamma::gamma;
    let c = g(upsilon + 1.0) / g(upsilon + 1.0 - alpha);
    (0..grid.len())
        .filter(|&i| grid.node(i) >= 0.05)
        .map(|i| {
            let exact = c * grid.node(i).powf(upsilon - alpha);
            (d.value(i) - exact).abs() / exact.abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn derivative_power_rule_across_orders() {
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        assert!(power_rule_error(alpha, 1.0, 500) < 1e-12, "linear data is exact");
        for upsilon in [1.5, 2.0, 3.0] {
            let e = power_rule_error(alpha, upsilon, 2000);
            assert!(e < 1e-2, "alpha {alpha} upsilon {upsilon}: {e:.3e}");
        }
    }
}

#[test]
fn l1_order_is_two_minus_alpha() {
    for alpha in [0.3, 0.5, 0.7] {
        let errs: Vec<f64> = [250, 500, 1000, 2000].iter().map(|&m| power_rule_error(alpha, 2.0, m)).collect();
        // the coarsest ratios are still pre-asymptotic
        let p = (errs[2] / errs[3]).log2();
        assert!((p - (2.0 - alpha)).abs() < 0.1, "alpha {alpha}: order {p:.3}");
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn grunwald_letnikov_is_first_order() {
    let errs: Vec<f64> = [500, 1000, 2000]
        .iter()
        .map(|&m| {
            let grid = Grid::new(0.0, 1.0, m).unwrap();
            let f = SampledFunction::from_fn(grid, |t| t * t);
            let d = left_rl_derivative_with(&f, order(0.5), Scheme::GrunwaldLetnikov).unwrap();
            let c = 2.0 / statrs::function::gamma::gamma(2.5);
            (0..grid.len())
                .filter(|&i| grid.node(i) >= 0.05)
                .map(|i| (d.value(i) - c * grid.node(i).powf(1.5)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in errs.windows(2) {
        let p = (w[0] / w[1]).log2();
        assert!((p - 1.0).abs() < 0.15, "order {p:.3}");
    }
}

#[test]
fn constant_rule_left_and_right() {
    let grid = Grid::new(0.0, 1.0, 800).unwrap();
    let c = SampledFunction::from_fn(grid, |_| 3.0);
    let g = statrs::function::gamma::gamma(0.6);
    let left = left_rl_derivative(&c, order(0.4)).unwrap();
    let right = right_rl_derivative(&c, order(0.4)).unwrap();
    assert!(left.value(0).is_nan() && right.value(800).is_nan());
    for k in 1..800 {
        let t = grid.node(k);
        assert!((left.value(k) - 3.0 * t.powf(-0.4) / g).abs() < 1e-12 * left.value(k).abs());
        assert!((right.value(k) - 3.0 * (1.0 - t).powf(-0.4) / g).abs() < 1e-12 * right.value(k).abs());
    }
}

#[test]
fn right_power_rule() {
    // ₜD_b^{1/2}(b − t)² = Γ(3)/Γ(2.5)·(b − t)^{1.5}
    let grid = Grid::new(0.0, 1.0, 2000).unwrap();
    let f = SampledFunction::from_fn(grid, |t| (1.0 - t).powi(2));
    let d = right_rl_derivative(&f, order(0.5)).unwrap();
    let c = 2.0 / statrs::function::gamma::gamma(2.5);
    for k in 0..grid.len() {
        let s = 1.0 - grid.node(k);
        if s >= 0.05 {
            assert!((d.value(k) - c * s.powf(1.5)).abs() <= 1e-3 * c * s.powf(1.5));
        }
    }
}

#[test]
fn near_integer_order_approaches_classical_derivative() {
    let grid = Grid::new(0.0, 1.0, 2000).unwrap();
    let f = SampledFunction::from_fn(grid, |t| t.sin() + 1.0);
    let d = left_rl_derivative(&f, order(1.0 - 1e-6)).unwrap();
    for k in 10..grid.len() {
        let exact = grid.node(k).cos();
        assert!((d.value(k) - exact).abs() < 1e-3, "node {k}: {} vs {exact}", d.value(k));
    }
}

#[test]
fn integer_order_uses_classical_derivative() {
    let grid = Grid::new(-1.0, 1.0, 40).unwrap();
    let f = SampledFunction::from_fn(grid, |t| t + 1.0);
    let left = left_rl_derivative(&f, order(1.0)).unwrap();
    let right = right_rl_derivative(&f, order(1.0)).unwrap();
    for k in 0..grid.len() {
        assert!((left.value(k) - 1.0).abs() < 1e-12);
        assert!((right.value(k) + 1.0).abs() < 1e-12);
    }
    assert!(matches!(left_rl_derivative(&f, order(1.5)), Err(Error::UnsupportedOrder(_))));
}

#[test]
fn closed_form_atoms_match_gamma_formula() {
    let g = statrs::function::gamma::gamma;
    for alpha in [0.2, 0.5, 0.9] {
        for (coef, upsilon) in [(1.0, 2.0), (-2.5, 0.5), (0.7, 3.25)] {
            let atom = ClosedFormAtom::power(coef, upsilon, 1.0).unwrap();
            for t in [1.1, 1.5, 3.0] {
                let ours = closed_form_left_derivative(&atom, order(alpha), t).unwrap();
                let theirs = coef * g(upsilon + 1.0) / g(upsilon + 1.0 - alpha) * (t - 1.0).powf(upsilon - alpha);
                assert!((ours - theirs).abs() < 1e-12 * theirs.abs());
            }
        }
    }
    let one = ClosedFormAtom::constant(1.0, 0.0);
    assert!((closed_form_left_derivative(&one, order(0.5), 1.0).unwrap() - 0.564_189_583_547_756_3).abs() < 1e-15);
    let sq = ClosedFormAtom::power(1.0, 2.0, 0.0).unwrap();
    assert!((closed_form_left_derivative(&sq, order(0.5), 1.0).unwrap() - 1.504_505_556_127_349).abs() < 1e-14);
}

#[test]
fn numeric_derivative_agrees_with_closed_form_atoms() {
    let grid = Grid::new(0.0, 1.0, 2000).unwrap();
    let atoms = [ClosedFormAtom::constant(2.0, 0.0), ClosedFormAtom::power(1.0, 2.0, 0.0).unwrap()];
    for atom in &atoms {
        let f = atom.sample(grid);
        let d = left_rl_derivative(&f, order(0.5)).unwrap();
        for k in (100..=2000).step_by(100) {
            let exact = closed_form_left_derivative(atom, order(0.5), grid.node(k)).unwrap();
            assert!((d.value(k) - exact).abs() <= 1e-3 * exact.abs());
        }
    }
}
