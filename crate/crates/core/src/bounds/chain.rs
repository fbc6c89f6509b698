//! The integral chain turning a subsolution profile into lower-bound
//! contributions. Every value is computed from kernels through
//! [`KernelProfile::x1_quartic_integral`].

use crate::exactfn::{BetaConstant, RationalFn};
use crate::profile::{convexity_certificate, neg_laplacian_bracket, ode_solve, Exponent, KernelProfile, ProfileFn};

use super::{BoundsError, Case};

/// Fixed data of one case: source profile `g`, linear weight profile,
/// geometric prefactors and the leading constant.
#[derive(Clone, Debug)]
pub struct CaseData {
    pub case: Case,
    /// `−ΔṼ = g(s) ρ^{−(n+2)/2}`.
    pub g: ProfileFn,
    /// The linear term integrates `weight(s) ρ^{−(n+4)/2} · V`.
    pub weight: ProfileFn,
    pub linear_prefactor: RationalFn,
    pub quadratic_prefactor: RationalFn,
    pub leading: RationalFn,
}

fn rf(s: &str) -> RationalFn {
    s.parse().expect("valid literal")
}

impl CaseData {
    pub fn new(case: Case) -> Self {
        match case {
            Case::Nonumbilic => CaseData {
                case,
                g: ProfileFn::s_pow(1),
                weight: ProfileFn::s_pow(2),
                linear_prefactor: rf("8*n^2*(n + 2) / 3"),
                quadratic_prefactor: rf("8*n^3*(n + 2) / 3"),
                leading: rf("(n - 12) / (4*n*(n - 1)*(n - 2)*(n - 3))"),
            },
            Case::Umbilic => CaseData {
                case,
                g: ProfileFn::s_pow(2),
                weight: ProfileFn::s_pow(3),
                linear_prefactor: rf("2*n^2*(n + 2) / 3"),
                quadratic_prefactor: rf("2*n^3*(n + 2) / 3"),
                leading: rf("3*(n - 10) / (2*n*(n - 1)*(n - 2)*(n - 3)*(n - 4)*(n - 5))"),
            },
        }
    }

    /// Exponent `α = n` of the subsolution kernel `f(s) ρ^{−n/2}`.
    pub fn alpha() -> RationalFn {
        RationalFn::n()
    }

    /// The standard subsolution: solution of `n·2·f + 2n(1+s)f′ = g`.
    pub fn subsolution(&self) -> Result<ProfileFn, BoundsError> {
        Ok(ode_solve(&Self::alpha(), &self.g)?)
    }

    /// Profile of the adjoint subsolution `ṽ ≥ F_v ρ^{−(n+2)/2}` with
    /// `−Δṽ = weight · ρ^{−(n+4)/2}`.
    pub fn adjoint_profile(&self) -> Result<ProfileFn, BoundsError> {
        Ok(ode_solve(&RationalFn::n_plus(2), &self.weight)?)
    }
}

fn kernel(p: ProfileFn, per_n: i64, offset: i64) -> KernelProfile {
    KernelProfile::new(p, Exponent::affine(per_n, offset))
}

fn integral(a: &KernelProfile, b: &KernelProfile) -> Result<BetaConstant, BoundsError> {
    Ok(a.checked_mul(b)?.x1_quartic_integral()?)
}

/// The part of `−Δ(V − f ρ^{−n/2})` produced by `f`: a pair of kernels
/// `(g − A_f) ρ^{−(n+2)/2}` and `f″ ρ^{−n/2}`, both nonnegative when `f` is
/// an admissible subsolution.
fn remainder_source(cd: &CaseData, f: &ProfileFn) -> (KernelProfile, KernelProfile) {
    let br = neg_laplacian_bracket(f, &CaseData::alpha());
    (kernel(&cd.g - &br.a, 1, 2), kernel(br.b, 1, 0))
}

/// `∫ weight ρ^{−(n+4)/2} · f ρ^{−n/2} x₁⁴`.
pub fn linear_main(cd: &CaseData, f: &ProfileFn) -> Result<BetaConstant, BoundsError> {
    integral(&kernel(cd.weight.clone(), 1, 4), &kernel(f.clone(), 1, 0))
}

/// Lower bound for `∫ weight ρ^{−(n+4)/2} (V − f ρ^{−n/2}) x₁⁴`, by pairing the
/// remainder source with the adjoint subsolution.
pub fn linear_correction(cd: &CaseData, f: &ProfileFn) -> Result<BetaConstant, BoundsError> {
    let fv = kernel(cd.adjoint_profile()?, 1, 2);
    let (resid, curv) = remainder_source(cd, f);
    Ok(&integral(&fv, &curv)? + &integral(&fv, &resid)?)
}

/// `∫ ρ^{−2} (f ρ^{−n/2})² x₁⁴`.
pub fn quadratic_square(f: &ProfileFn) -> Result<BetaConstant, BoundsError> {
    Ok(kernel(f.checked_mul(f)?, 2, 4).x1_quartic_integral()?)
}

/// Lower bound for `2 ∫ ρ^{−2} f ρ^{−n/2} (V − f ρ^{−n/2}) x₁⁴` through the
/// adjoint problem with source `2f ρ^{−(n+4)/2}`. Requires the adjoint
/// profile to be convex at `n` when `n` is given; returns `None` when it is
/// not (the term is then only known to be nonnegative).
pub fn quadratic_cross(
    cd: &CaseData,
    f: &ProfileFn,
    check_at: Option<i64>,
) -> Result<Option<BetaConstant>, BoundsError> {
    let two_f = f.scale(&RationalFn::from_int(2));
    let fw = match ode_solve(&RationalFn::n_plus(2), &two_f) {
        Ok(p) => p,
        Err(_) => return Ok(None),
    };
    if let Some(n) = check_at {
        if !convexity_certificate(&fw, n)?.is_convex() {
            return Ok(None);
        }
    }
    let fw = kernel(fw, 1, 2);
    let (resid, curv) = remainder_source(cd, f);
    Ok(Some(&integral(&fw, &curv)? + &integral(&fw, &resid)?))
}

/// Supersolution profile `s/(4n)` for the nonumbilic problem.
pub fn supersolution() -> ProfileFn {
    ProfileFn::s_pow(1).scale(&rf("1 / (4*n)"))
}
