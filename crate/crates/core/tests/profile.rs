use conformal_bounds::exactfn::RationalFn;
use conformal_bounds::profile::{moment_integral, neg_laplacian_bracket, ode_solve, Exponent, ProfileError, ProfileFn};
use proptest::prelude::*;

fn rf(s: &str) -> RationalFn {
    s.parse().unwrap()
}

fn coeff() -> impl Strategy<Value = RationalFn> {
    (-9i64..=9, 1i64..=5, any::<bool>()).prop_map(|(p, q, with_n)| {
        let c = RationalFn::ratio(p, q);
        if with_n {
            &c * &RationalFn::n_plus(1)
        } else {
            c
        }
    })
}

fn profile(max_terms: usize, exps: std::ops::RangeInclusive<i64>, logs: bool) -> impl Strategy<Value = ProfileFn> {
    prop::collection::vec((coeff(), exps, any::<bool>()), 0..=max_terms).prop_map(move |ts| {
        ts.into_iter().fold(ProfileFn::zero(), |acc, (c, a, l)| &acc + &ProfileFn::term(c, Exponent::int(a), l && logs))
    })
}

/// Fourth-order five-point second and first differences.
fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_text_round_trips(f in profile(6, -6..=4, true)) {
        let text = f.to_string();
        let back: ProfileFn = text.parse().unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn ode_solution_satisfies_equation_numerically(
        g in profile(4, -3..=3, true),
        top in any::<bool>(),
        s in 0.05f64..8.0,
    ) {
        let n = 9;
        let alpha = if top { RationalFn::n_plus(2) } else { RationalFn::n() };
        match ode_solve(&alpha, &g) {
            Ok(f) => {
                let a = alpha.eval_f64(n).unwrap();
                let fe = f.at(n).unwrap();
                let ge = g.at(n).unwrap();
                let h = 1e-3 * (1.0 + s);
                let fp = d1(|x| fe.eval(x), s, h);
                let lhs = a * (n as f64 + 2.0 - a) * fe.eval(s) + 2.0 * a * (1.0 + s) * fp;
                let (gv, scale) = ge.eval_with_scale(s);
                let (_, fscale) = fe.eval_with_scale(s);
                let tol = 1e-7 * (scale + a * a * fscale * (1.0 + s)) + 1e-12;
                prop_assert!((lhs - gv).abs() <= tol, "lhs {} g {} at s {}", lhs, gv, s);
                prop_assert!(f.value_at_zero().is_zero());
            }
            Err(ProfileError::Inexpressible(_)) => prop_assert!(g.has_log()),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn bracket_matches_finite_differences(
        f in profile(4, -4..=2, true),
        top in any::<bool>(),
        pts in prop::collection::vec((0.2f64..3.0, 0.1f64..3.0), 20),
    ) {
        let n = 9;
        let alpha = if top { RationalFn::n_plus(2) } else { RationalFn::n() };
        let br = neg_laplacian_bracket(&f, &alpha);
        let a = alpha.eval_f64(n).unwrap();
        let fe = f.at(n).unwrap();
        let phi = |r: f64, s: f64| fe.eval(s) * (r * r + (1.0 + s) * (1.0 + s)).powf(-a / 2.0);
        for (r, s) in pts {
            let h = 2e-3 * r.min(s + 0.05).min(0.1) * 10.0;
            let rr = d2(|x| phi(x, s), r, h);
            let rd = (n as f64 + 2.0) / r * d1(|x| phi(x, s), r, h);
            let ss = d2(|y| phi(r, y), s, h.min(s / 2.5));
            let fd = -(rr + rd + ss);
            let exact = br.eval(r, s, n).unwrap();
            let scale = rr.abs() + rd.abs() + ss.abs() + exact.abs();
            prop_assert!((fd - exact).abs() <= 1e-6 * scale + 1e-300,
                "r {} s {}: fd {} bracket {}", r, s, fd, exact);
        }
    }

    #[test]
    fn moment_is_linear(f in profile(4, -7..=-2, true), g in profile(4, -7..=-2, true)) {
        let f = f.shift_power(Exponent::affine(-1, 0));
        let g = g.shift_power(Exponent::affine(-1, 0));
        let lhs = moment_integral(&(&f + &g)).unwrap();
        let rhs = &moment_integral(&f).unwrap() + &moment_integral(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn cubic_log_profile_moment() {
    // h₁ · (1 − (1+s)^{−3}) · (1+s)^{−n+1}, with h₁ the undivided cubic-log profile.
    let h1 = ode_solve(&RationalFn::n_plus(2), &ProfileFn::s_pow(3)).unwrap().scale(&rf("2*(n + 2)"));
    let factor = &ProfileFn::one() - &ProfileFn::power(Exponent::int(-3));
    let integrand = h1.checked_mul(&factor).unwrap().shift_power(Exponent::affine(-1, 1));
    let expect = rf("18*(5*n^3 - 24*n^2 + 51*n - 40) / ((n - 5)*(n - 4)*(n - 3)*(n - 2)^2*(n - 1)*n*(n + 1)^2)");
    assert_eq!(moment_integral(&integrand).unwrap(), expect);
}
