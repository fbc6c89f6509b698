use conformal_bounds::bounds::Case;
use conformal_bounds::exactfn::RationalFn;
use conformal_bounds::numint::*;
use conformal_bounds::pde::{GridSpec, ProfileTag};
use conformal_bounds::profile::{moment_integral, radial_moment, Exponent, ProfileFn};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn chain_integrals_match_exact_values() {
    for case in [Case::Nonumbilic, Case::Umbilic] {
        let all = chain_integrals(case).unwrap();
        assert_eq!(all.len(), 4);
        for ci in all {
            for n in [7, 9, 11] {
                let q = ci.numeric(n, CubatureOptions::default()).unwrap();
                let e = ci.exact_value(n).unwrap();
                assert!(rel(q.value, e) < 1e-9, "{case:?} {} n={n}: {} vs {e}", ci.label, q.value);
            }
        }
    }
}

#[test]
fn main_linear_integral_at_nine() {
    let ci = &chain_integrals(Case::Nonumbilic).unwrap()[0];
    let q = ci.numeric(9, CubatureOptions::default()).unwrap();
    let exact = 9.0 / (4.0 * 100.0 * 729.0 * 8.0 * 7.0 * 6.0);
    assert!(rel(q.value, exact) < 1e-10);
    assert!(q.error <= 1e-10 * q.value);
}

#[test]
fn h1_moment_matches_closed_form() {
    let literal: RationalFn =
        "18*(5*n^3 - 24*n^2 + 51*n - 40) / ((n - 5)*(n - 4)*(n - 3)*(n - 2)^2*(n - 1)*n*(n + 1)^2)".parse().unwrap();
    for n in [7, 9, 11] {
        let (q, exact) = h1_moment(n, 1e-12).unwrap();
        assert_eq!(exact, literal);
        assert!(rel(q.value, literal.eval_f64(n).unwrap()) < 1e-9);
    }
}

#[test]
fn separable_integrand_factorizes() {
    let n = 9;
    let f = ProfileFn::s_pow(2).shift_power(Exponent::int(-12));
    let m = Exponent::affine(1, 2);
    let s_part = moment_integral(&f).unwrap().eval_f64(n).unwrap();
    let r_part = radial_moment(Exponent::affine(1, 2), m).unwrap().value(n).unwrap();
    let fnum = f.at(n).unwrap();
    let g = ReducedIntegrand::new(n, move |r, s| fnum.eval(s) * (1.0 + r * r).powi(-11));
    let q = cubature(&g, Interval::From(0.0), Interval::From(0.0), CubatureOptions::default()).unwrap();
    assert!(rel(q.value, s_part * r_part) < 1e-10);
}

#[test]
fn error_estimate_is_monotone_in_tolerance() {
    let ci = &chain_integrals(Case::Umbilic).unwrap()[2];
    let g = ReducedIntegrand::product(7, &ci.terms[0]).unwrap();
    let mut last = f64::INFINITY;
    let mut tol = 1e-4;
    while tol > 1e-12 {
        let q = quad2d(&g, 7, CubatureOptions { tol, max_panels: 50_000 }).unwrap();
        assert!(q.error <= last, "tol {tol}");
        last = q.error;
        tol /= 2.0;
    }
}

#[test]
fn budget_and_tail_failures() {
    let ci = &chain_integrals(Case::Nonumbilic).unwrap()[0];
    let g = ReducedIntegrand::product(9, &ci.terms[0]).unwrap();
    let r = quad2d(&g, 9, CubatureOptions { tol: 1e-12, max_panels: 3 });
    assert!(matches!(r, Err(NumintError::ToleranceNotReached { .. })));
    let slow = ReducedIntegrand::new(9, |r, s| (1.0 + r * r + s * s).powf(-6.0));
    assert!(matches!(quad2d(&slow, 9, CubatureOptions::default()), Err(NumintError::DivergentTail { .. })));
}

#[test]
fn symmetric_pair_has_zero_discrepancy() {
    let src = ProfileTag::V.source();
    let pair = AdjointPair { name: "V/V".into(), phi1: src.clone(), phi2: src, n: 9 };
    let r = check_adjointness(&pair, GridSpec::square(65)).unwrap();
    assert_eq!(r.discrepancy, 0.0);
}

#[test]
fn standard_adjoint_pairs_agree() {
    for pair in standard_adjoint_pairs() {
        let base = check_adjointness(&pair, GridSpec::square(257)).unwrap();
        let fine = check_adjointness(&pair, GridSpec::square(513)).unwrap();
        assert!(base.discrepancy < 1e-5, "{}: {base:?}", pair.name);
        assert!(fine.discrepancy < base.discrepancy, "{}", pair.name);
        assert!(fine.raw_discrepancy < base.raw_discrepancy, "{}", pair.name);
    }
}

#[test]
fn numeric_constants() {
    let r = compute_c_numeric(Case::Nonumbilic, 9, NumericOptions::default()).unwrap();
    assert!(r.contained, "{r:?}");
    assert!(r.value > 1.0 / 42240.0 && r.error >= 0.0);
    let r = compute_c_numeric(Case::Umbilic, 7, NumericOptions::default()).unwrap();
    assert!(r.value + r.error >= 19.0 / 155520.0 && r.contained);
    assert!(r.upper_bound_exact.is_none());
    let r = compute_c_numeric(Case::Nonumbilic, 8, NumericOptions::default()).unwrap();
    assert!(r.value.is_finite() && r.error.is_finite());
    let json = serde_json::to_value(&r).unwrap();
    for key in ["case", "n", "value", "error", "units", "lower_bound_exact", "upper_bound_exact", "contained"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}
