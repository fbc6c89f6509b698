//! End-to-end acceptance run: one line per criterion, nonzero exit when any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use conformal_bounds::bounds::{
    assemble, optimize_subsolution, standard_basis, threshold_report, Case, OptimizeOptions, Target,
};
use conformal_bounds::exactfn::{RationalFn, Sign};
use conformal_bounds::numint::{
    chain_integrals, check_adjointness, compute_c_numeric, h1_moment, standard_adjoint_pairs, CubatureOptions,
    NumericOptions,
};
use conformal_bounds::pde::{convergence_study, sandwich_check, FarField, GridSpec, Problem, ProfileTag};
use conformal_bounds::profile::{ode_residual, ode_solve, Exponent, ProfileFn};

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn rf(s: &str) -> RationalFn {
    s.parse().expect("literal")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_total(target: Target, literal: &str) -> Check {
    let a = assemble(target).map_err(|e| e.to_string())?;
    let expected = rf(literal);
    let nonzero = a.contributions.iter().filter(|c| !c.value().coeff.is_zero()).count();
    ensure(a.total.coeff == expected, || format!("total {} != {}", a.total.coeff, expected))?;
    Ok(format!("{nonzero} nonzero terms sum to {expected}"))
}

fn c1_lower() -> Check {
    exact_total(Target::C1Lower, "(n^2 - 8*n - 5) / (4*(n + 2)*(n + 1)*(n - 1)^2*(n - 3))")
}

fn c2_lower() -> Check {
    exact_total(
        Target::C2Lower,
        "(3*n^3 - 24*n^2 + 27*n + 34) / (2*(n - 5)*(n - 4)*(n - 3)*(n - 2)*(n - 1)^2*(n + 1)*(n + 2))",
    )
}

fn c1_upper() -> Check {
    let line = exact_total(Target::C1Upper, "(3*n^2 - 11*n - 6) / (8*(n + 1)*n*(n - 1)*(n - 2)*(n - 3))")?;
    let a = assemble(Target::C1Upper).map_err(|e| e.to_string())?;
    let at4 = a.total.coeff.eval(4).map_err(|e| e.to_string())?;
    ensure(a.total.coeff.sign_at(4) == Ok(Sign::Negative), || format!("value at n = 4 is {at4}"))?;
    Ok(format!("{line}; n = 4 gives {at4}"))
}

fn thresholds() -> Check {
    let assemblies: Vec<_> = [Target::C1Lower, Target::C2Lower]
        .into_iter()
        .map(assemble)
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let report = threshold_report(&assemblies);
    let first = |t| report.entry(t).and_then(|e| e.first_positive.filter(|_| e.positive_for_all_larger));
    let (c1, c2) = (first(Target::C1Lower), first(Target::C2Lower));
    ensure(c1 == Some(9) && c2 == Some(7), || format!("first positive: C1 {c1:?}, C2 {c2:?}"))?;
    Ok("C1 > 0 for n >= 9, C2 > 0 for n >= 7".into())
}

/// The six displayed solutions, built in the `(1+s)` basis from their
/// `s`-polynomial forms.
fn displayed_solutions() -> Vec<(&'static str, RationalFn, ProfileFn, ProfileFn)> {
    let s = ProfileFn::s_pow;
    let p = |k| ProfileFn::power(Exponent::int(k));
    let log = || ProfileFn::log_power(Exponent::ZERO);
    let c = |x: &str| ProfileFn::constant(rf(x));
    let over = |f: ProfileFn| f.shift_power(Exponent::int(-1));
    let sum = |v: Vec<ProfileFn>| v.iter().fold(ProfileFn::zero(), |a, b| &a + b);
    let k = rf("1 / (2*(n + 2))");
    let h1 = sum(vec![
        p(3).scale(&rf("1/3")),
        p(2).scale(&rf("-3/2")),
        p(1).scale(&rf("3")),
        log().scale(&rf("-1")),
        c("-11/6"),
    ]);
    let h2 = sum(vec![p(2).scale(&rf("1/2")), p(1).scale(&rf("-3")), log().scale(&rf("3")), p(-1), c("3/2")]);
    vec![
        ("s^2/(4n(1+s))", RationalFn::n(), s(1), over(s(2)).scale(&rf("1 / (4*n)"))),
        (
            "(s^2/2 - s + log(1+s))/(2(n+2))",
            RationalFn::n_plus(2),
            s(2),
            sum(vec![s(2).scale(&rf("1/2")), s(1).scale(&rf("-1")), log()]).scale(&k),
        ),
        (
            "(1 + s - 2log(1+s) - 1/(1+s))/(2(n+2))",
            RationalFn::n_plus(2),
            over(s(2)),
            sum(vec![c("1"), s(1), log().scale(&rf("-2")), p(-1).scale(&rf("-1"))]).scale(&k),
        ),
        ("s^3/(6n(1+s))", RationalFn::n(), s(2), over(s(3)).scale(&rf("1 / (6*n)"))),
        ("h1/(2(n+2))", RationalFn::n_plus(2), s(3), h1.scale(&k)),
        ("h2/(2(n+2))", RationalFn::n_plus(2), over(s(3)), h2.scale(&k)),
    ]
}

fn ode_forms() -> Check {
    let all = displayed_solutions();
    for (label, alpha, g, expected) in &all {
        let f = ode_solve(alpha, g).map_err(|e| format!("{label}: {e}"))?;
        ensure(f.to_string() == expected.to_string(), || format!("{label}: got {f}, expected {expected}"))?;
        let res = ode_residual(alpha, &f, g);
        ensure(res.is_zero(), || format!("{label}: residual {res}"))?;
    }
    Ok(format!("{} closed forms, zero residual", all.len()))
}

fn integral_chain() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for case in [Case::Nonumbilic, Case::Umbilic] {
        for ci in chain_integrals(case).map_err(|e| e.to_string())? {
            for n in [7, 9, 11] {
                let q =
                    ci.numeric(n, CubatureOptions::default()).map_err(|e| format!("{case} {} n={n}: {e}", ci.label))?;
                let exact = ci.exact_value(n).map_err(|e| e.to_string())?;
                let d = rel(q.value, exact);
                ensure(d < 1e-9, || format!("{case} {} n={n}: relative error {d:e}", ci.label))?;
                worst = worst.max(d);
                count += 1;
            }
        }
    }
    let literal = rf("18*(5*n^3 - 24*n^2 + 51*n - 40) / ((n - 5)*(n - 4)*(n - 3)*(n - 2)^2*(n - 1)*n*(n + 1)^2)");
    for n in [7, 9, 11] {
        let (q, exact) = h1_moment(n, 1e-12).map_err(|e| e.to_string())?;
        ensure(exact == literal, || format!("h1 moment closed form {exact}"))?;
        let d = rel(q.value, literal.eval_f64(n).map_err(|e| e.to_string())?);
        ensure(d < 1e-9, || format!("h1 n={n}: relative error {d:e}"))?;
        worst = worst.max(d);
        count += 1;
    }
    Ok(format!("{count} integrals, worst relative error {worst:.2e}"))
}

fn sandwich(tag: ProfileTag, n: i64) -> Check {
    let problem = Problem::tagged(tag, n, FarField::Subsolution).map_err(|e| e.to_string())?;
    let specs = [GridSpec::square(65), GridSpec::square(129), GridSpec::square(GridSpec::DEFAULT_NODES)];
    let study = convergence_study(&problem, &specs).map_err(|e| e.to_string())?;
    let order = study.report.order;
    let tol = study.report.tolerance_for(specs[2].h(), 1.0);
    let field = study.fields.last().expect("field");
    let r = sandwich_check(field, tol).map_err(|e| e.to_string())?;
    ensure((1.7..=2.3).contains(&order), || format!("observed order {order:.3}"))?;
    ensure(r.pass, || format!("violations lower {:e} upper {:e} > {tol:e}", r.lower.value, r.upper.value))?;
    let bounds = if r.upper_bound.is_some() { "sub and super" } else { "lower only" };
    Ok(format!(
        "{bounds}, order {order:.3}, tolerance C h^2 = {tol:.2e}, violations {:.1e}/{:.1e}",
        r.lower.value, r.upper.value
    ))
}

fn sandwich_v() -> Check {
    sandwich(ProfileTag::V, 9)
}

fn lower_lambda() -> Check {
    sandwich(ProfileTag::Lambda, 7)
}

fn adjointness() -> Check {
    let mut parts = Vec::new();
    for pair in standard_adjoint_pairs() {
        let base = check_adjointness(&pair, GridSpec::square(257)).map_err(|e| e.to_string())?;
        let fine = check_adjointness(&pair, GridSpec::square(513)).map_err(|e| e.to_string())?;
        ensure(base.discrepancy < 1e-5, || format!("{}: discrepancy {:e}", pair.name, base.discrepancy))?;
        ensure(fine.discrepancy < base.discrepancy, || {
            format!("{}: {:e} does not decrease to {:e}", pair.name, base.discrepancy, fine.discrepancy)
        })?;
        parts.push(format!("{} {:.1e}->{:.1e}", pair.name, base.discrepancy, fine.discrepancy));
    }
    Ok(parts.join(", "))
}

fn containment() -> Check {
    let mut parts = Vec::new();
    for n in [9, 10, 11] {
        let r = compute_c_numeric(Case::Nonumbilic, n, NumericOptions::default()).map_err(|e| e.to_string())?;
        let hi = r.upper_bound_exact.ok_or("no upper bound")?;
        let inside = r.value + r.error >= r.lower_bound_exact && r.value - r.error <= hi;
        ensure(inside, || format!("n={n}: {:e} ± {:e} outside [{:e}, {hi:e}]", r.value, r.error, r.lower_bound_exact))?;
        parts.push(format!("n={n}: {:.4e} ± {:.1e}", r.value, r.error));
    }
    Ok(parts.join(", "))
}

fn optimizer() -> Check {
    let opts = OptimizeOptions::default();
    let mut parts = Vec::new();
    for (case, n) in [(Case::Nonumbilic, 9), (Case::Umbilic, 7)] {
        let basis = standard_basis(case).map_err(|e| e.to_string())?;
        let own = optimize_subsolution(case, n, &basis, &opts).map_err(|e| e.to_string())?;
        let target = if case == Case::Nonumbilic { Target::C1Lower } else { Target::C2Lower };
        let exact = assemble(target).map_err(|e| e.to_string())?.total.coeff.eval(n).map_err(|e| e.to_string())?;
        ensure(own.certified_bound == exact, || format!("{case}: {} != {exact}", own.certified_bound))?;
        let mut wide = basis.clone();
        wide.push(ProfileFn::s_pow(3).shift_power(Exponent::int(-2)));
        wide.push(ProfileFn::s_pow(4).shift_power(Exponent::int(-3)));
        let more = optimize_subsolution(case, n, &wide, &opts).map_err(|e| e.to_string())?;
        ensure(more.certified_bound >= exact, || format!("{case}: enlarged {} < {exact}", more.certified_bound))?;
        parts.push(format!("{case} n={n}: own {exact}, enlarged {}", more.certified_bound));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "C1 lower exact identity", limit: Duration::from_secs(1), run: c1_lower },
        Criterion { id: 2, name: "C2 lower exact identity", limit: Duration::from_secs(1), run: c2_lower },
        Criterion { id: 3, name: "C1 upper exact identity", limit: Duration::from_secs(1), run: c1_upper },
        Criterion { id: 4, name: "sign thresholds", limit: Duration::from_secs(1), run: thresholds },
        Criterion { id: 5, name: "ODE closed forms", limit: Duration::from_secs(1), run: ode_forms },
        Criterion { id: 6, name: "integral-chain oracle", limit: Duration::from_secs(60), run: integral_chain },
        Criterion { id: 7, name: "V sandwich at n = 9", limit: Duration::from_secs(300), run: sandwich_v },
        Criterion { id: 8, name: "Lambda lower bound at n = 7", limit: Duration::from_secs(300), run: lower_lambda },
        Criterion { id: 9, name: "adjointness", limit: Duration::from_secs(600), run: adjointness },
        Criterion { id: 10, name: "numeric containment", limit: Duration::from_secs(900), run: containment },
        Criterion { id: 11, name: "optimizer soundness", limit: Duration::from_secs(120), run: optimizer },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed <= c.limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.2?} > {:?}", c.limit))
            }
        });
        match result {
            Ok(msg) => println!("[PASS] {:>2} {}: {msg} ({elapsed:.2?})", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {:>2} {}: {msg} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
