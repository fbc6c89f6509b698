//! The closed-form integrals of the bound chains, paired with integrands
//! built pointwise from their kernel factors.

use crate::bounds::chain::CaseData;
use crate::bounds::{assemble, Case, Target, LINEAR_CORRECTION, LINEAR_MAIN, QUADRATIC_CROSS, QUADRATIC_SQUARE};
use crate::exactfn::{BetaConstant, RationalFn};
use crate::profile::{moment_integral, neg_laplacian_bracket, ode_solve, Exponent, KernelProfile, ProfileFn};

use super::{
    quad1d_semi_infinite, quad2d, CubatureOptions, NumericConstant, NumintError, Quadrature, ReducedIntegrand,
};

/// `Σ_k ∫ Π_j factor_{kj} x₁⁴ dx` with its exact value.
#[derive(Clone, Debug)]
pub struct ChainIntegral {
    pub case: Case,
    pub label: &'static str,
    pub terms: Vec<Vec<KernelProfile>>,
    pub exact: BetaConstant,
}

impl ChainIntegral {
    pub fn numeric(&self, n: i64, opts: CubatureOptions) -> Result<NumericConstant, NumintError> {
        let mut value = 0.0;
        let mut error = 0.0;
        let mut evaluations = 0;
        for factors in &self.terms {
            let q = quad2d(&ReducedIntegrand::product(n, factors)?, n, opts)?;
            value += q.value;
            error += q.error;
            evaluations += q.evaluations;
        }
        Ok(NumericConstant::in_units(value, error, evaluations))
    }

    pub fn exact_value(&self, n: i64) -> Result<f64, NumintError> {
        Ok(self.exact.coeff.eval_f64(n)?)
    }
}

fn kernel(p: ProfileFn, offset: i64) -> KernelProfile {
    KernelProfile::new(p, Exponent::affine(1, offset))
}

fn pairings(adjoint: &ProfileFn, remainder: &[KernelProfile]) -> Vec<Vec<KernelProfile>> {
    remainder.iter().filter(|k| !k.profile.is_zero()).map(|k| vec![kernel(adjoint.clone(), 2), k.clone()]).collect()
}

/// The four chain integrals of a case for its standard subsolution; exact
/// values are read from the verified assembly.
pub fn chain_integrals(case: Case) -> Result<Vec<ChainIntegral>, NumintError> {
    let cd = CaseData::new(case);
    let f = cd.subsolution()?;
    let target = match case {
        Case::Nonumbilic => Target::C1Lower,
        Case::Umbilic => Target::C2Lower,
    };
    let asm = assemble(target)?;
    let exact = |label: &str| asm.contribution(label).expect("assembly label").integral.clone();
    let br = neg_laplacian_bracket(&f, &RationalFn::n());
    let remainder = [kernel(br.b.clone(), 0), kernel(&cd.g - &br.a, 2)];
    let fw = ode_solve(&RationalFn::n_plus(2), &f.scale(&RationalFn::from_int(2)))?;
    let fk = kernel(f.clone(), 0);
    Ok(vec![
        ChainIntegral {
            case,
            label: LINEAR_MAIN,
            terms: vec![vec![kernel(cd.weight.clone(), 4), fk.clone()]],
            exact: exact(LINEAR_MAIN),
        },
        ChainIntegral {
            case,
            label: LINEAR_CORRECTION,
            terms: pairings(&cd.adjoint_profile()?, &remainder),
            exact: exact(LINEAR_CORRECTION),
        },
        ChainIntegral {
            case,
            label: QUADRATIC_SQUARE,
            terms: vec![vec![fk.clone(), fk, KernelProfile::new(ProfileFn::one(), Exponent::int(4))]],
            exact: exact(QUADRATIC_SQUARE),
        },
        ChainIntegral { case, label: QUADRATIC_CROSS, terms: pairings(&fw, &remainder), exact: exact(QUADRATIC_CROSS) },
    ])
}

/// `∫₀^∞ h₁(s)(1 − (1+s)^{−3})(1+s)^{1−n} ds` with
/// `h₁ = (1+s)³/3 − 3(1+s)²/2 + 3(1+s) − log(1+s) − 11/6`: the numeric value
/// and the exact moment.
pub fn h1_moment(n: i64, tol: f64) -> Result<(Quadrature, RationalFn), NumintError> {
    let nf = n as f64;
    let numeric = quad1d_semi_infinite(
        |s| {
            let t: f64 = 1.0 + s;
            let h1 = t.powi(3) / 3.0 - 1.5 * t * t + 3.0 * t - t.ln() - 11.0 / 6.0;
            h1 * (1.0 - t.powi(-3)) * t.powf(1.0 - nf)
        },
        0.0,
        tol,
        4000,
    )?;
    let h1 = [(3, "1/3"), (2, "-3/2"), (1, "3"), (0, "-11/6")]
        .into_iter()
        .map(|(e, c)| ProfileFn::term(c.parse().expect("literal"), Exponent::int(e), false))
        .fold(-&ProfileFn::log_power(Exponent::ZERO), |a, b| a + b);
    let w = (ProfileFn::one() - ProfileFn::power(Exponent::int(-3))).shift_power(Exponent::affine(-1, 1));
    let exact = moment_integral(&h1.checked_mul(&w)?)?;
    Ok((numeric, exact))
}
