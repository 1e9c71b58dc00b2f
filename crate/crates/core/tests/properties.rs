mod common;

use implicit_series::analytic::{self, AnalyticProblem};
use implicit_series::expr::{self, Expr};
use implicit_series::implicit::{self, ImplicitProblem, SolveOptions, Variant};
use implicit_series::lagrange::{self, RevertibleSeries};
use implicit_series::universal::{self, ForestType};
use implicit_series::{MultiIndex, Rat, Vars, WSeries, ZWSeries};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rat::new(p, q))
}

/// Series in `z` and `(u, v)` at orders `(3, 3)`.
fn zw_series() -> impl Strategy<Value = ZWSeries> {
    prop::collection::vec((0u32..=3, 0u32..=3, 0u32..=3, small_rat()), 0..8).prop_map(|ts| {
        ZWSeries::from_terms(
            Vars::new(["u", "v"]),
            3,
            3,
            ts.into_iter().map(|(k, a, b, c)| (k, MultiIndex::from([a, b]), c)),
        )
    })
}

fn w_series_no_constant() -> impl Strategy<Value = WSeries> {
    prop::collection::vec((0u32..=4, 0u32..=4, small_rat()), 0..8).prop_map(|ts| {
        WSeries::from_terms(
            Vars::new(["u", "v"]),
            4,
            ts.into_iter().filter(|(a, b, _)| a + b > 0).map(|(a, b, c)| (MultiIndex::from([a, b]), c)),
        )
    })
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..20, 1i64..5).prop_map(|(p, q)| Expr::Rational(Rat::new(p, q))),
        Just(Expr::Var("z".into())),
        Just(Expr::Var("w".into())),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Div(b(x), b(y))),
            inner.clone().prop_map(move |x| Expr::Neg(b(x))),
            (inner.clone(), 0u32..4).prop_map(move |(x, n)| Expr::Pow(b(x), n)),
            inner.clone().prop_map(|x| Expr::Call("exp".into(), vec![x])),
            (inner.clone(), inner).prop_map(|(x, y)| Expr::Call("sokalF".into(), vec![x, y])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in zw_series(), b in zw_series(), c in zw_series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn product_rule(a in zw_series(), b in zw_series()) {
        // d/dz drops the z-order by one, so compare at the shared order.
        let lhs = (&a * &b).d_dz();
        let rhs = &(&a.d_dz() * &b.with_orders(2, 3)) + &(&a.with_orders(2, 3) * &b.d_dz());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_substitution(s in w_series_no_constant()) {
        let e = expr::series("exp(-z)", &Vars::new(["u", "v"]), 4, 4).unwrap();
        prop_assert_eq!(e.substitute_z(&s).unwrap(), s.scale(&-Rat::one()).exp_series().unwrap());
    }

    #[test]
    fn reciprocal_and_log(s in w_series_no_constant(), c in 1i64..5) {
        let u = &s + &WSeries::constant(s.vars().clone(), s.order(), Rat::from(c));
        let one = WSeries::constant(s.vars().clone(), s.order(), Rat::one());
        prop_assert_eq!(&u.reciprocal().unwrap() * &u, one.clone());
        let v = &s + &one;
        prop_assert_eq!(v.log_series().unwrap().exp_series().unwrap(), v);
    }

    #[test]
    fn print_parse_round_trip(e in expr_tree()) {
        let names = ["w".to_string()];
        let back = expr::parse(&e.to_string(), &names).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn elaboration_is_order_monotone(e in expr_tree()) {
        let vars = Vars::w();
        if let Ok(high) = expr::elaborate(&e, &vars, 5, 5) {
            let low = expr::elaborate(&e, &vars, 3, 2).unwrap();
            prop_assert_eq!(high.with_orders(3, 2), low);
        }
    }

    #[test]
    fn revert_is_a_compositional_inverse(seed in any::<u64>(), n in 1u32..=12) {
        let f = common::random_revertible(&mut rng(seed), n);
        let phi = lagrange::revert(&RevertibleSeries::from_coeffs(f.clone()).unwrap(), n);
        let fz = ZWSeries::from_z_coeffs(Vars::w(), n, n, &f);
        prop_assert_eq!(fz.substitute_z(&phi).unwrap(), WSeries::univariate("w", n, &[Rat::zero(), Rat::one()]));
    }

    #[test]
    fn lagrange_forms_agree(seed in any::<u64>(), n in 1u32..=10) {
        let mut r = rng(seed);
        let f = RevertibleSeries::from_coeffs(common::random_revertible(&mut r, n)).unwrap();
        let h = ZWSeries::from_z_coeffs(Vars::w(), n, 0, &common::random_dense(&mut r, n));
        let a = lagrange::revert_compose(&f, &h, n).unwrap();
        prop_assert_eq!(&a, &lagrange::revert_compose_alt(&f, &h, n).unwrap());
        prop_assert_eq!(a, h.with_orders(n, n).substitute_z(&lagrange::revert(&f, n)).unwrap());
    }

    #[test]
    fn every_variant_is_a_fixed_point(seed in any::<u64>(), nvars in 1usize..=2, order in 1u32..=10) {
        let order = if nvars == 2 { order.min(7) } else { order };
        let g = common::random_admissible_g(&mut rng(seed), nvars, order);
        let p = ImplicitProblem::new(g.clone()).unwrap();
        let reference = implicit::solve_by_recurrence(&p).unwrap();
        prop_assert_eq!(g.substitute_z(&reference).unwrap(), reference.clone());
        for variant in [Variant::Finite, Variant::Integer, Variant::Recurrence] {
            let opts = SolveOptions { variant, ..SolveOptions::default() };
            let phi = implicit::solve(&p, &opts).unwrap().phi;
            prop_assert_eq!(&phi, &reference, "{}", variant);
        }
        prop_assert!(implicit::solve_finite_integer(&p).unwrap().phi.is_integral());
    }

    #[test]
    fn normalization_preserves_the_solution(seed in any::<u64>(), order in 1u32..=8, b in prop_oneof![Just(Rat::new(1, 2)), Just(Rat::new(-1, 3)), Just(Rat::new(3, 1)), Just(Rat::new(-2, 1))]) {
        let g0 = common::random_admissible_g(&mut rng(seed), 1, order);
        let z = ZWSeries::z(Vars::w(), order, order);
        let g = &g0 + &z.scale(&b);
        let p = ImplicitProblem::new(g.clone()).unwrap();
        let rec = implicit::solve_by_recurrence(&p).unwrap();
        prop_assert_eq!(g.substitute_z(&rec).unwrap(), rec.clone());
        let opts = SolveOptions { normalize: true, ..SolveOptions::default() };
        prop_assert_eq!(implicit::solve(&p, &opts).unwrap().phi, rec);
    }

    #[test]
    fn extra_terms_change_nothing(seed in any::<u64>(), order in 1u32..=7) {
        let g = common::random_admissible_g(&mut rng(seed), 1, order);
        let p = ImplicitProblem::new(g).unwrap();
        let phi = implicit::solve_finite(&p).unwrap().phi;
        prop_assert_eq!(implicit::solve_finite_to(&p, 2 * order).unwrap(), phi.clone());
        for m in 1..=2 * order + 1 {
            let term = implicit::finite_term(&p, m);
            for (a, c) in term.terms() {
                let cutoff = if p.vanishes_at_w_zero() { a.degree() } else { 2 * a.degree() - 1 };
                prop_assert!(c.is_zero() || m <= cutoff, "m = {} alpha = {}", m, a);
            }
        }
    }

    #[test]
    fn universal_substitution(seed in any::<u64>(), ell in 1u32..=3, order in 1u32..=5) {
        let g = common::random_admissible_g(&mut rng(seed), 1, order);
        let p = ImplicitProblem::new(g).unwrap();
        prop_assert!(universal::substitution_check(&p, ell).unwrap());
    }
}

#[test]
fn gamma_choices_agree() {
    // F = z·e^{-z} − w with γ = e^{z} (so G = w·e^{z}) and with γ = 1.
    let n = 12;
    let f = expr::series("z*exp(-z) - w", &Vars::w(), n, n).unwrap();
    let mut solutions = Vec::new();
    for gamma in ["exp(z)", "1"] {
        let gamma = expr::series(gamma, &Vars::w(), n, n).unwrap();
        let p = ImplicitProblem::from_implicit(&f, &gamma).unwrap();
        solutions.push(implicit::solve_finite(&p).unwrap().phi);
    }
    assert_eq!(solutions[0], solutions[1]);
    assert_eq!(solutions[0], lagrange::revert(&RevertibleSeries::new(&expr::series("z*exp(-z)", &Vars::w(), n, 0).unwrap()).unwrap(), n));
}

#[test]
fn universal_coefficients_are_integral_multinomials() {
    for ell in 1..=4 {
        for (t, c) in universal::universal_table(ell, 12) {
            assert!(t.is_admissible());
            assert_eq!(Rat::from(c.clone()).to_integer().map(|x| x.to_string()), Some(c.to_string()));
            assert_eq!(universal::universal_coeff(&t), c);
        }
    }
}

#[test]
fn admissible_extensions_are_finite_and_complete() {
    for ell in 1..=3u32 {
        for k0 in 0..=6u32 {
            for k1 in 0..=3u32 {
                let ext = universal::admissible_extensions(ell, k0, k1);
                // Brute force over k_2..k_7 in 0..=6: Σ (n−1)k_n = k0 − ℓ forces n − 1 ≤ k0.
                let mut brute = Vec::new();
                if k0 >= ell {
                    let target = k0 - ell;
                    let mut k = [0u32; 6];
                    loop {
                        let s: u32 = k.iter().enumerate().map(|(i, &x)| (i as u32 + 1) * x).sum();
                        if s == target {
                            let mut full = vec![k0, k1];
                            full.extend_from_slice(&k);
                            brute.push(ForestType::new(ell, full));
                        }
                        let mut i = 0;
                        while i < 6 {
                            k[i] += 1;
                            if k[i] <= 6 {
                                break;
                            }
                            k[i] = 0;
                            i += 1;
                        }
                        if i == 6 {
                            break;
                        }
                    }
                }
                brute.sort();
                let mut ext_sorted = ext.clone();
                ext_sorted.sort();
                assert_eq!(ext_sorted, brute, "ell = {ell}, k0 = {k0}, k1 = {k1}");
                assert!(ext.iter().all(ForestType::is_admissible));
            }
        }
    }
}

fn analytic_family() -> Vec<&'static str> {
    vec!["w + z^2", "w + z*(1 - exp(-z))", "w*exp(z)", "w + w*z/2 - z^3", "w/(1 - z)"]
}

#[test]
fn analytic_routes_agree() {
    let h = expr::series("z", &Vars::w(), 1, 1).unwrap();
    let mut checked = 0;
    for text in analytic_family() {
        for w in [0.02, 0.05, 0.1] {
            let g = expr::series(text, &Vars::w(), 40, 2).unwrap();
            let point = vec![Complex64::new(w, 0.01)];
            let Ok(p) = AnalyticProblem::with_auto_radius(&g, point.clone(), 128, 1e-15) else { continue };
            let r = analytic::check_rouche(&p);
            if r.min_margin <= 0.05 * r.rho {
                continue;
            }
            let fp = analytic::fixed_point_iterate(&p, Complex64::new(0.0, 0.0)).unwrap();
            let c = analytic::contour_coefficients(&p, &h, 0).unwrap();
            assert!((fp.value - c.total).norm() < 1e-10, "{text} at w = {w}");
            // Q-refinement
            let p2 = AnalyticProblem::new(&g, point, r.rho, 256, 1e-15).unwrap();
            let c2 = analytic::contour_coefficients(&p2, &h, 0).unwrap();
            assert!((c2.total - c.total).norm() < 1e-10, "{text} at w = {w}: Q doubling");
            checked += 1;
        }
    }
    assert!(checked >= 10, "only {checked} cases met the margin condition");
}

#[test]
fn numeric_fixed_point_matches_exact_series() {
    let n = 30;
    let mut checked = 0;
    for text in analytic_family() {
        let exact_g = expr::series(text, &Vars::w(), n, n).unwrap();
        let phi = implicit::solve_by_recurrence(&ImplicitProblem::new(exact_g).unwrap()).unwrap();
        let c: Vec<f64> = phi.to_univariate().iter().map(Rat::to_f64).collect();
        for w in [0.01, 0.03] {
            // ratio-test tail bound from the last computed coefficients
            let ratio = (c[n as usize] / c[n as usize - 1]).abs() * w;
            let last = (c[n as usize] * w.powi(n as i32)).abs();
            if ratio >= 1.0 || last * ratio / (1.0 - ratio) >= 1e-12 {
                continue;
            }
            let sum: f64 = c.iter().enumerate().map(|(m, x)| x * w.powi(m as i32)).sum();
            let g = expr::series(text, &Vars::w(), 40, 2).unwrap();
            let p = AnalyticProblem::with_auto_radius(&g, vec![Complex64::new(w, 0.0)], 128, 1e-15).unwrap();
            let fp = analytic::fixed_point_iterate(&p, Complex64::new(0.0, 0.0)).unwrap();
            assert!((fp.value - sum).norm() < 1e-11, "{text} at w = {w}: {} vs {sum}", fp.value);
            checked += 1;
        }
    }
    assert!(checked >= 8, "only {checked} cases had a small enough tail");
}
