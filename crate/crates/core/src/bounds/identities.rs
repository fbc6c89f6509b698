//! Exact identity checks: assembly totals against their closed forms, the six
//! ODE solutions against their displayed forms, and the twelve intermediate
//! integral values of the two chains.

use serde::Serialize;

use crate::exactfn::RationalFn;
use crate::profile::{moment_integral, ode_residual, ode_solve, radial_moment, Exponent, ProfileFn};

use super::{chain::CaseData, BoundAssembly, BoundsError, Case, Target};
use super::{LINEAR_CORRECTION, LINEAR_MAIN, QUADRATIC_CROSS, QUADRATIC_SQUARE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityGroup {
    Assembly,
    Ode,
    Chain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub group: IdentityGroup,
    pub case: Case,
    pub label: String,
    pub expected: String,
    pub computed: String,
    /// `computed − expected` when the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub ok: bool,
}

impl IdentityCheck {
    fn rational(group: IdentityGroup, case: Case, label: &str, computed: &RationalFn, expected: &RationalFn) -> Self {
        let diff = computed - expected;
        IdentityCheck {
            group,
            case,
            label: label.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            ok: diff.is_zero(),
            residual: (!diff.is_zero()).then(|| diff.to_string()),
        }
    }
}

fn rf(s: &str) -> RationalFn {
    s.parse().expect("valid literal")
}

fn pw(k: i64) -> ProfileFn {
    ProfileFn::power(Exponent::int(k))
}

fn log1p() -> ProfileFn {
    ProfileFn::log_power(Exponent::ZERO)
}

fn num(k: i64, d: i64) -> RationalFn {
    RationalFn::ratio(k, d)
}

/// The six closed-form solutions as displayed, converted to the `(1+s)` basis
/// independently of the solver: `(case, label, α, g, f)`.
pub fn reference_ode_solutions() -> Vec<(Case, &'static str, RationalFn, ProfileFn, ProfileFn)> {
    let over_2n2 = rf("1 / (2*(n + 2))");
    let s = ProfileFn::s_pow;
    let ode2 = (&(&s(2).scale(&num(1, 2)) - &s(1)) + &log1p()).scale(&over_2n2);
    let ode3 = (&(&(&ProfileFn::one() + &s(1)) - &log1p().scale(&num(2, 1))) - &pw(-1)).scale(&over_2n2);
    let h1 = [
        pw(3).scale(&num(1, 3)),
        pw(2).scale(&num(-3, 2)),
        pw(1).scale(&num(3, 1)),
        -&log1p(),
        ProfileFn::constant(num(-11, 6)),
    ]
    .iter()
    .fold(ProfileFn::zero(), |a, b| &a + b);
    let h2 = [
        pw(2).scale(&num(1, 2)),
        pw(1).scale(&num(-3, 1)),
        log1p().scale(&num(3, 1)),
        pw(-1),
        ProfileFn::constant(num(3, 2)),
    ]
    .iter()
    .fold(ProfileFn::zero(), |a, b| &a + b);
    let over_1p = |p: ProfileFn| p.shift_power(Exponent::int(-1));
    vec![
        (
            Case::Nonumbilic,
            "f = s^2/(4n(1+s)) solves the source-s equation with alpha = n",
            RationalFn::n(),
            s(1),
            over_1p(s(2)).scale(&rf("1 / (4*n)")),
        ),
        (
            Case::Nonumbilic,
            "(s^2/2 - s + log(1+s))/(2(n+2)) solves the source-s^2 equation with alpha = n+2",
            RationalFn::n_plus(2),
            s(2),
            ode2,
        ),
        (
            Case::Nonumbilic,
            "(1 + s - 2log(1+s) - 1/(1+s))/(2(n+2)) solves the source-s^2/(1+s) equation with alpha = n+2",
            RationalFn::n_plus(2),
            over_1p(s(2)),
            ode3,
        ),
        (
            Case::Umbilic,
            "f = s^3/(6n(1+s)) solves the source-s^2 equation with alpha = n",
            RationalFn::n(),
            s(2),
            over_1p(s(3)).scale(&rf("1 / (6*n)")),
        ),
        (
            Case::Umbilic,
            "h1/(2(n+2)) solves the source-s^3 equation with alpha = n+2",
            RationalFn::n_plus(2),
            s(3),
            h1.scale(&over_2n2),
        ),
        (
            Case::Umbilic,
            "h2/(2(n+2)) solves the source-s^3/(1+s) equation with alpha = n+2",
            RationalFn::n_plus(2),
            over_1p(s(3)),
            h2.scale(&over_2n2),
        ),
    ]
}

pub fn ode_identities() -> Vec<IdentityCheck> {
    reference_ode_solutions()
        .into_iter()
        .map(|(case, label, alpha, g, expect)| {
            let (computed, ok, residual) = match ode_solve(&alpha, &g) {
                Ok(f) => {
                    let res = ode_residual(&alpha, &f, &g);
                    let same = f.to_string() == expect.to_string();
                    let residual = if !same {
                        Some((&f - &expect).to_string())
                    } else if !res.is_zero() {
                        Some(res.to_string())
                    } else {
                        None
                    };
                    (f.to_string(), residual.is_none(), residual)
                }
                Err(e) => (format!("error: {e}"), false, Some(e.to_string())),
            };
            IdentityCheck {
                group: IdentityGroup::Ode,
                case,
                label: label.into(),
                expected: expect.to_string(),
                computed,
                residual,
                ok,
            }
        })
        .collect()
}

pub fn assembly_identities(assemblies: &[BoundAssembly]) -> Vec<IdentityCheck> {
    assemblies
        .iter()
        .map(|a| {
            IdentityCheck::rational(
                IdentityGroup::Assembly,
                a.target.case(),
                &format!("{} total equals its closed form", a.target),
                &a.total.coeff,
                &a.target.closed_form(),
            )
        })
        .collect()
}

/// Integral values of the two lower-bound chains, read from the given
/// assemblies, plus the one-dimensional moments and the radial moment the
/// chains are built from.
pub fn chain_identities(assemblies: &[BoundAssembly]) -> Result<Vec<IdentityCheck>, BoundsError> {
    let integral = |t: Target, label: &str| -> Option<RationalFn> {
        let a = assemblies.iter().find(|a| a.target == t)?;
        Some(a.contribution(label)?.integral.coeff.clone())
    };
    let mut out = Vec::new();
    let mut push = |case: Case, label: &str, computed: Option<RationalFn>, expected: &str| {
        if let Some(c) = computed {
            out.push(IdentityCheck::rational(IdentityGroup::Chain, case, label, &c, &rf(expected)));
        }
    };
    let top = Exponent::affine(-1, -2);
    let nu = CaseData::new(Case::Nonumbilic);
    let um = CaseData::new(Case::Umbilic);
    let has = |t: Target| assemblies.iter().any(|a| a.target == t);
    let two_n2 = rf("2*(n + 2)");

    if has(Target::C1Lower) {
        let c = Case::Nonumbilic;
        push(
            c,
            "linear main integral",
            integral(Target::C1Lower, LINEAR_MAIN),
            "9 / (4*(n + 1)^2*n^3*(n - 1)*(n - 2)*(n - 3))",
        );
        let v1 = nu.adjoint_profile()?.scale(&two_n2).shift_power(top);
        push(
            c,
            "moment of (s^2/2 - s + log(1+s))(1+s)^(-n-2)",
            Some(moment_integral(&v1)?),
            "2 / ((n + 1)^2*n*(n - 1))",
        );
        push(
            c,
            "radial moment of r^(n+2) (1+r^2)^(-(n+1))",
            Some(radial_moment(Exponent::affine(1, 2), Exponent::affine(1, 1))?.coeff),
            "(n + 1) / (4*n)",
        );
        push(
            c,
            "linear correction integral",
            integral(Target::C1Lower, LINEAR_CORRECTION),
            "3 / (8*(n + 2)*(n + 1)^2*n^3*(n - 1)^2)",
        );
        push(
            c,
            "quadratic square integral",
            integral(Target::C1Lower, QUADRATIC_SQUARE),
            "9 / (16*(n + 2)*(n + 1)^2*n^4*(n - 1)*(n - 2))",
        );
        let w1 = ode_solve(&RationalFn::n_plus(2), &ProfileFn::s_pow(2).shift_power(Exponent::int(-1)))?
            .scale(&two_n2)
            .shift_power(top);
        push(
            c,
            "moment of (1 + s - 2log(1+s) - 1/(1+s))(1+s)^(-n-2)",
            Some(moment_integral(&w1)?),
            "2 / (n*(n + 2)*(n + 1)^2)",
        );
        push(
            c,
            "quadratic cross integral",
            integral(Target::C1Lower, QUADRATIC_CROSS),
            "3 / (16*n^4*(n + 2)^2*(n + 1)^2*(n - 1))",
        );
    }
    if has(Target::C2Lower) {
        let c = Case::Umbilic;
        push(
            c,
            "linear main integral",
            integral(Target::C2Lower, LINEAR_MAIN),
            "45 / ((n + 1)^2*n^3*(n - 1)*(n - 2)*(n - 3)*(n - 4)*(n - 5))",
        );
        let h1 = um.adjoint_profile()?.scale(&two_n2);
        let factor = &ProfileFn::one() - &pw(-3);
        let h1_int = h1.checked_mul(&factor)?.shift_power(Exponent::affine(-1, 1));
        push(
            c,
            "moment of h1(s)(1 - (1+s)^(-3))(1+s)^(-n+1)",
            Some(moment_integral(&h1_int)?),
            "18*(5*n^3 - 24*n^2 + 51*n - 40) / ((n - 5)*(n - 4)*(n - 3)*(n - 2)^2*(n - 1)*n*(n + 1)^2)",
        );
        push(c, "linear correction integral", integral(Target::C2Lower, LINEAR_CORRECTION),
            "9*(5*n^3 - 24*n^2 + 51*n - 40) / (4*n^2*(n + 2)*(n - 1)*(n - 5)*(n - 4)*(n - 3)*(n - 2)^2*(n - 1)*n*(n + 1)^2)");
        push(
            c,
            "quadratic square integral",
            integral(Target::C2Lower, QUADRATIC_SQUARE),
            "15 / (2*(n + 2)*(n + 1)^2*n^4*(n - 1)*(n - 2)*(n - 3)*(n - 4))",
        );
        push(
            c,
            "quadratic cross integral",
            integral(Target::C2Lower, QUADRATIC_CROSS),
            "3*(5*n^3 - 13*n^2 + 26*n - 16) / (4*(n - 4)*(n - 3)*(n - 2)^2*(n - 1)^2*n^4*(n + 1)^2*(n + 2)^2)",
        );
    }
    Ok(out)
}

/// Builds the assemblies (optionally restricted to one case and with one
/// contribution multiplied by two) and runs every identity check.
pub fn verify_all(case: Option<Case>, corrupt: Option<&str>) -> Result<Vec<IdentityCheck>, BoundsError> {
    let mut assemblies = Vec::new();
    for t in Target::ALL {
        if case.is_some_and(|c| c != t.case()) {
            continue;
        }
        let mut a = super::build(t)?;
        if let Some(label) = corrupt {
            a.corrupt(label, &RationalFn::from_int(2));
        }
        assemblies.push(a);
    }
    let mut out = assembly_identities(&assemblies);
    out.extend(ode_identities().into_iter().filter(|c| case.is_none_or(|k| k == c.case)));
    out.extend(chain_identities(&assemblies)?);
    Ok(out)
}
