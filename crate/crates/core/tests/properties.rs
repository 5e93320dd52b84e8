use lseries_core::analytic::{
    count_zeros, fe_residual, majorant_check, zero_set_compare, Builtin, Custom, MajorantGrid,
    Rectangle,
};
use lseries_core::coefficients::{lift_coeff, BuiltinCharacter, CoefficientSource};
use lseries_core::euler_split::{split_theorem1, split_theorem3, QuotientInput, Theorem1Config, Theorem3Config};
use lseries_core::fe::{check_lift_laws, conductor, degree, lift_data, GammaFactorData};
use lseries_core::kronecker::{solve, Fixed, KroneckerError, KroneckerTarget};
use lseries_core::series::DirichletSeries;
use lseries_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gamma_data() -> impl Strategy<Value = GammaFactorData> {
    (
        0.05f64..20.0,
        prop::collection::vec((0.1f64..3.0, -2.0f64..2.0, -5.0f64..5.0), 1..4),
        0.0f64..std::f64::consts::TAU,
    )
        .prop_map(|(q, factors, arg)| {
            let lambda = factors.iter().map(|f| f.0).collect();
            let mu = factors.iter().map(|f| c(f.1, f.2)).collect();
            GammaFactorData::new(q, lambda, mu, Complex64::from_polar(1.0, arg), 0).unwrap()
        })
}

fn builtin_source() -> impl Strategy<Value = CoefficientSource> {
    prop_oneof![
        Just(CoefficientSource::Zeta),
        Just(CoefficientSource::dirichlet(BuiltinCharacter::Mod3)),
        Just(CoefficientSource::dirichlet(BuiltinCharacter::Mod4)),
        Just(CoefficientSource::dirichlet(BuiltinCharacter::Mod5Quartic)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_laws_hold(data in gamma_data(), k in 1u32..8) {
        let r = check_lift_laws(&data, k).unwrap();
        prop_assert!(r.degree_rel_diff() < 1e-9);
        prop_assert!(r.conductor_rel_diff() < 1e-9);
        let lifted = lift_data(&data, k).unwrap();
        let d = degree(&data);
        prop_assert!((degree(&lifted) - k as f64 * d).abs() < 1e-9 * k as f64 * d);
        let law = conductor(&data).powi(k as i32) * (k as f64).powf(k as f64 * d);
        prop_assert!((conductor(&lifted) / law - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lift_coefficients_follow_the_substitution(k in 1u32..4, n in 1u64..40) {
        let base = CoefficientSource::dirichlet(BuiltinCharacter::Mod4);
        let lifted = CoefficientSource::lift(base.clone(), k).unwrap();
        let m = n.pow(k);
        let expect = base.coeff(n).unwrap() * (n as f64).powf((k as f64 - 1.0) / 2.0);
        prop_assert!((lifted.coeff(m).unwrap() - expect).norm() < 1e-12);
        prop_assert!((lift_coeff(&base, k, m).unwrap() - expect).norm() < 1e-12);
        if k > 1 && n > 1 {
            prop_assert_eq!(lifted.coeff(m + 1).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn inverse_is_a_convolution_inverse(vals in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..60)) {
        let mut v: Vec<Complex64> = vals.iter().map(|&(a, b)| c(a, b)).collect();
        v[0] = c(1.0, 0.0);
        let s = DirichletSeries::from_values(&v);
        let prod = s.convolve(&s.inverse().unwrap());
        prop_assert!(prod.max_abs_diff(&DirichletSeries::identity(v.len())) < 1e-6);
    }

    #[test]
    fn theorem1_split_reconstructs(source in builtin_source(), eps in 0.05f64..0.5, c0 in 3.0f64..6.0, cutoff in 1.0f64..300.0) {
        let split = split_theorem1(&source, &Theorem1Config::new(eps, c0).with_cutoff(cutoff), 600).unwrap();
        let direct = source.coefficients(600).unwrap();
        prop_assert!(split.reconstruct().max_abs_diff(&direct) < 1e-9);
        prop_assert!(split.complete_multiplicativity_failures().is_empty());
    }

    #[test]
    fn theorem3_split_reconstructs(source in builtin_source(), cutoff in 2u64..200) {
        let cfg = Theorem3Config::with_cutoff(cutoff);
        let split = split_theorem3(&QuotientInput::Source(source.clone()), 500, &cfg).unwrap();
        let direct = source.coefficients(500).unwrap();
        prop_assert!(split.reconstruct().max_abs_diff(&direct) < 1e-9);
    }

    #[test]
    fn kronecker_solutions_are_sound(
        thetas in prop::collection::vec(0.05f64..2.0, 1..4),
        betas in prop::collection::vec(0.0f64..1.0, 3),
        t_min in 0.0f64..50.0,
        eta in 0.02f64..0.2,
    ) {
        let k = thetas.len();
        let mut th = thetas.clone();
        for (i, t) in th.iter_mut().enumerate() {
            *t += i as f64 * 0.123_456_7;
        }
        let target = KroneckerTarget::new(th.clone(), betas[..k].to_vec(), t_min, eta).unwrap();
        match solve(&target, 20) {
            Ok(s) => {
                prop_assert!(s.t_approx > t_min && s.max_error < eta);
                let direct = target.evaluate(s.t.clone(), s.method, 0);
                prop_assert!(direct.max_error < eta);
                for (i, t) in th.iter().enumerate() {
                    let x = s.t_approx * t - target.betas()[i];
                    prop_assert!((x - x.round()).abs() < eta + 1e-9);
                }
            }
            Err(KroneckerError::BudgetExhausted { best_error, .. }) => prop_assert!(best_error >= eta),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn kronecker_refinement_is_monotone(
        betas in prop::collection::vec(0.0f64..1.0, 2),
        eta in 0.04f64..0.2,
    ) {
        let th = vec![-(2f64.ln()) / std::f64::consts::TAU, -(3f64.ln()) / std::f64::consts::TAU];
        let coarse = KroneckerTarget::new(th.clone(), betas.clone(), 5.0, eta).unwrap();
        let fine = coarse.with_eta(eta / 2.0).unwrap();
        let best = |r: Result<lseries_core::kronecker::KroneckerSolution, KroneckerError>| match r {
            Ok(s) => s.max_error,
            Err(KroneckerError::BudgetExhausted { best_error, .. }) => best_error,
            Err(e) => panic!("{e}"),
        };
        let a = best(solve(&coarse, 5));
        let b = best(solve(&fine, 10));
        // Errors are exact values rounded to f64.
        prop_assert!(b <= a * (1.0 + 4.0 * f64::EPSILON), "{} > {}", b, a);
    }

    #[test]
    fn fixed_point_products_match_floats(a in -1e6f64..1e6, b in -1e3f64..1e3) {
        let p = &Fixed::from_f64(a) * &Fixed::from_f64(b);
        prop_assert!((p.to_f64() - a * b).abs() <= 1e-15 * (a * b).abs().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zeta_counts_are_additive(split in 1.0f64..49.0) {
        let whole = Rectangle::new(-0.5, 1.5, 0.0, 50.0).unwrap();
        let (lo, hi) = whole.split_at_height(split).unwrap();
        let total = count_zeros(&Builtin::Zeta, whole).unwrap();
        let a = count_zeros(&Builtin::Zeta, lo).unwrap();
        let b = count_zeros(&Builtin::Zeta, hi).unwrap();
        prop_assert_eq!(a.count + b.count, total.count);
        for r in [&total, &a, &b] {
            prop_assert!((r.winding - r.winding.round()).abs() <= 0.05);
            prop_assert!(r.min_edge_modulus > 0.0);
        }
    }

    #[test]
    fn functional_equation_at_random_points(sigma in -1.0f64..2.0, t in -100.0f64..100.0) {
        let s = c(sigma, t);
        for b in [
            Builtin::Zeta,
            Builtin::Dirichlet(BuiltinCharacter::Mod3),
            Builtin::Dirichlet(BuiltinCharacter::Mod4),
            Builtin::Dirichlet(BuiltinCharacter::Mod5Real),
            Builtin::Dirichlet(BuiltinCharacter::Mod5Quartic),
        ] {
            if b == Builtin::Zeta && ((s - 1.0).norm() < 1e-3 || s.norm() < 1e-3) {
                continue;
            }
            let r = fe_residual(&b.gamma_data(), b, s).unwrap();
            prop_assert!(r.absolute < 1e-6, "{} at {}: {:?}", b.name(), s, r);
        }
    }

    #[test]
    fn self_majorant_and_self_zero_sets(t0 in 0.0f64..20.0) {
        let grid = MajorantGrid { t_min: t0, t_max: t0 + 5.0, t_steps: 20, sigma_steps: 2, refine_zeros: false };
        let chi = Builtin::Dirichlet(BuiltinCharacter::Mod4);
        prop_assert!(majorant_check(&chi, &chi, (0.55, 0.9), &|_| 1.0, &grid).unwrap().passes());
        let region = Rectangle::new(0.2, 0.9, t0, t0 + 5.0).unwrap();
        prop_assert!(zero_set_compare(&chi, &chi, region).unwrap().all_matched());
    }
}

#[test]
fn custom_function_with_pole_counts_zeros() {
    // (s - 2 - i)/(s - 1) has one zero and one pole inside.
    let f = Custom::new("ratio", |s| Ok((s - c(2.0, 1.0)) / (s - 1.0))).with_poles(vec![(c(1.0, 0.0), 1)]);
    let r = count_zeros(&f, Rectangle::new(0.0, 3.0, -2.0, 2.0).unwrap()).unwrap();
    assert_eq!(r.count, 1);
    assert_eq!(r.pole_correction, 1);
    assert!(r.winding.abs() < 0.05);
}

#[test]
fn eigenform_data_matches_fe() {
    let d = Builtin::Eigenform.gamma_data();
    assert_eq!(d, GammaFactorData::level_one_eigenform(12));
    let r = fe_residual(&d, Builtin::Eigenform, c(0.3, 42.0)).unwrap();
    assert!(r.scaled < 1e-7);
}
