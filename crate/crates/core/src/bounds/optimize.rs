//! Sampled linear-programming search for better subsolution profiles.
//!
//! A candidate `f = Σ cᵢ bᵢ` (`cᵢ ≥ 0`) is admissible when `f(0) = 0`, `f ≥ 0`,
//! `f″ ≥ 0` and `α(n+2−α)f + 2α(1+s)f′ ≤ g` with `α = n`. For such `f` the
//! lower-bound chain is affine in `f` in its linear part, which is the LP
//! objective; the quadratic part is evaluated afterwards.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactfn::{rational_to_f64, RationalFn};
use crate::profile::{certification_samples, convexity_certificate, neg_laplacian_bracket, Convexity, ProfileFn};

use super::chain::{self, CaseData};
use super::simplex::maximize;
use super::{assemble, BoundsError, Case, Target};

#[derive(Clone, Debug)]
pub struct OptimizeOptions {
    /// Pivot budget per linear program.
    pub max_pivots: usize,
    /// Relative margin applied when the constraint `A_f ≤ g` is only known on
    /// the sample.
    pub safety: f64,
    /// Seed of the random points added to the refined verification sample.
    pub seed: u64,
    pub random_samples: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { max_pivots: 10_000, safety: 1e-6, seed: 0, random_samples: 64 }
    }
}

#[derive(Clone, Debug)]
pub struct SubsolutionCandidate {
    pub case: Case,
    pub n: i64,
    pub alpha: RationalFn,
    pub f: ProfileFn,
    /// One coefficient per basis element (zero for unused elements).
    pub coefficients: Vec<BigRational>,
    /// Certified lower bound in units of `ω_{n−2} B((n−1)/2, (n+1)/2)`.
    pub certified_bound: BigRational,
    pub linear_part: BigRational,
    pub quadratic_part: BigRational,
    /// True when `g − A_f` vanishes identically, so no sampling margin was
    /// needed.
    pub exact: bool,
    pub convexity: Convexity,
    /// The exact assembly total at `n`, for comparison.
    pub reference_bound: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub case: Case,
    pub n: i64,
    pub alpha: String,
    pub profile: String,
    pub coefficients: Vec<String>,
    pub certified_bound: String,
    pub certified_bound_f64: f64,
    pub linear_part: String,
    pub quadratic_part: String,
    pub reference_bound: String,
    pub reference_bound_f64: f64,
    pub improves_on_reference: bool,
    pub exact: bool,
    pub convexity: Convexity,
}

impl SubsolutionCandidate {
    pub fn report(&self) -> CandidateReport {
        CandidateReport {
            case: self.case,
            n: self.n,
            alpha: self.alpha.to_string(),
            profile: self.f.to_string(),
            coefficients: self.coefficients.iter().map(ToString::to_string).collect(),
            certified_bound: self.certified_bound.to_string(),
            certified_bound_f64: rational_to_f64(&self.certified_bound),
            linear_part: self.linear_part.to_string(),
            quadratic_part: self.quadratic_part.to_string(),
            reference_bound: self.reference_bound.to_string(),
            reference_bound_f64: rational_to_f64(&self.reference_bound),
            improves_on_reference: self.certified_bound > self.reference_bound,
            exact: self.exact,
            convexity: self.convexity.clone(),
        }
    }
}

fn rat(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite sample value")
}

fn constant(q: &BigRational) -> RationalFn {
    RationalFn::from_rational(q)
}

/// Linear part of the bound, `P_lin · (main + correction)`, exactly at `n`.
fn linear_value(cd: &CaseData, f: &ProfileFn, n: i64) -> Result<BigRational, BoundsError> {
    let v = &chain::linear_main(cd, f)?.coeff + &chain::linear_correction(cd, f)?.coeff;
    Ok((&cd.linear_prefactor * &v).eval(n)?)
}

/// Quadratic part, `P_quad · (square + cross)`, dropping the cross term when
/// its adjoint profile is not certified convex.
fn quadratic_value(cd: &CaseData, f: &ProfileFn, n: i64) -> Result<BigRational, BoundsError> {
    let mut v = chain::quadratic_square(f)?.coeff;
    if let Some(cross) = chain::quadratic_cross(cd, f, Some(n))? {
        v = &v + &cross.coeff;
    }
    Ok((&cd.quadratic_prefactor * &v).eval(n)?)
}

fn combine(basis: &[ProfileFn], coeffs: &[BigRational]) -> ProfileFn {
    basis
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(ProfileFn::zero(), |acc, (b, c)| &acc + &b.scale(&constant(c)))
}

/// Geometric sample four times denser than the certification sample, plus
/// seeded log-uniform points on the same span.
fn refined_samples(opts: &OptimizeOptions) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out: Vec<f64> =
        std::iter::once(0.0).chain((0..=160).map(|k| 1e-3 * f64::powf(2.0, k as f64 / 4.0))).collect();
    out.extend((0..opts.random_samples).map(|_| 1e-3 * f64::powf(2.0, rng.random_range(0.0..40.0))));
    out
}

struct Prepared {
    a: Vec<ProfileFn>,
    b: Vec<ProfileFn>,
    objective: Vec<BigRational>,
}

fn prepare(cd: &CaseData, basis: &[ProfileFn], n: i64) -> Result<Prepared, BoundsError> {
    let alpha = CaseData::alpha();
    let base = linear_value(cd, &ProfileFn::zero(), n)?;
    let mut prep = Prepared { a: vec![], b: vec![], objective: vec![] };
    for (index, f) in basis.iter().enumerate() {
        if !f.value_at_zero().eval(n)?.is_zero() {
            return Err(BoundsError::InvalidBasis { index, reason: "f(0) != 0".into() });
        }
        let br = neg_laplacian_bracket(f, &alpha);
        prep.a.push(br.a);
        prep.b.push(br.b);
        let obj = linear_value(cd, f, n).map_err(|e| BoundsError::InvalidBasis { index, reason: e.to_string() })?;
        prep.objective.push(obj - &base);
    }
    Ok(prep)
}

/// Solves the sampled LP over the basis elements in `active`.
fn solve_lp(
    cd: &CaseData,
    basis: &[ProfileFn],
    prep: &Prepared,
    active: &[usize],
    n: i64,
    opts: &OptimizeOptions,
) -> Result<Vec<BigRational>, BoundsError> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for s in certification_samples() {
        let t = rat(1.0 + s);
        let lt = rat((1.0 + s).ln());
        let ev = |p: &ProfileFn| p.eval_exact(n, &t, &lt);
        // A_f ≤ g, −f″ ≤ 0, −f ≤ 0
        rows.push(active.iter().map(|&i| ev(&prep.a[i])).collect::<Result<Vec<_>, _>>()?);
        rhs.push(ev(&cd.g)?);
        rows.push(active.iter().map(|&i| ev(&prep.b[i]).map(|v| -v)).collect::<Result<Vec<_>, _>>()?);
        rhs.push(BigRational::zero());
        rows.push(active.iter().map(|&i| ev(&basis[i]).map(|v| -v)).collect::<Result<Vec<_>, _>>()?);
        rhs.push(BigRational::zero());
    }
    let c: Vec<_> = active.iter().map(|&i| prep.objective[i].clone()).collect();
    let sol = maximize(&c, &rows, &rhs, opts.max_pivots)?;
    let mut full = vec![BigRational::zero(); basis.len()];
    for (k, &i) in active.iter().enumerate() {
        full[i] = sol.x[k].clone();
    }
    Ok(full)
}

/// Turns LP coefficients into a certified candidate: exact when the residual
/// `g − A_f` vanishes identically at `n`, otherwise scaled down by the worst
/// relative violation on a refined sample plus the safety margin.
fn certify(
    cd: &CaseData,
    basis: &[ProfileFn],
    mut coeffs: Vec<BigRational>,
    n: i64,
    reference_bound: &BigRational,
    opts: &OptimizeOptions,
) -> Result<Option<SubsolutionCandidate>, BoundsError> {
    let alpha = CaseData::alpha();
    let mut f = combine(basis, &coeffs);
    let residual = &cd.g - &neg_laplacian_bracket(&f, &alpha).a;
    let exact = residual.terms().all(|(_, c)| c.eval(n).is_ok_and(|v| v.is_zero()));
    if !exact {
        let r = residual.at(n)?;
        let g = cd.g.at(n)?;
        let mut worst = 0.0f64;
        for s in refined_samples(opts).into_iter().skip(1) {
            let (rv, scale) = r.eval_with_scale(s);
            let gv = g.eval(s);
            let excess = (-rv).max(0.0) + 64.0 * f64::EPSILON * scale;
            worst = worst.max(excess / gv);
        }
        let shrink = rat(1.0 / (1.0 + opts.safety + worst));
        coeffs.iter_mut().for_each(|c| *c *= &shrink);
        f = combine(basis, &coeffs);
    }
    let convexity = convexity_certificate(&f, n)?;
    if !convexity.is_convex() {
        return Ok(None);
    }
    let fe = f.at(n)?;
    if refined_samples(opts).into_iter().any(|s| {
        let (v, scale) = fe.eval_with_scale(s);
        v < -64.0 * f64::EPSILON * scale
    }) {
        return Ok(None);
    }
    let linear_part = linear_value(cd, &f, n)?;
    let quadratic_part = quadratic_value(cd, &f, n)?;
    let certified_bound = cd.leading.eval(n)? + &linear_part + &quadratic_part;
    Ok(Some(SubsolutionCandidate {
        case: cd.case,
        n,
        alpha,
        f,
        coefficients: coeffs,
        certified_bound,
        linear_part,
        quadratic_part,
        exact,
        convexity,
        reference_bound: reference_bound.clone(),
    }))
}

/// Best certified subsolution from nonnegative combinations of `basis` at
/// dimension `n`.
///
/// Linear programs are solved over every prefix of the basis and every single
/// element, and the best certified candidate is returned, so appending
/// elements never lowers the result.
pub fn optimize_subsolution(
    case: Case,
    n: i64,
    basis: &[ProfileFn],
    opts: &OptimizeOptions,
) -> Result<SubsolutionCandidate, BoundsError> {
    if basis.is_empty() {
        return Err(BoundsError::Infeasible("empty basis".into()));
    }
    let cd = CaseData::new(case);
    let target = match case {
        Case::Nonumbilic => Target::C1Lower,
        Case::Umbilic => Target::C2Lower,
    };
    let reference_bound = assemble(target)?.total.coeff.eval(n)?;
    let prep = prepare(&cd, basis, n)?;

    let mut subsets: Vec<Vec<usize>> = (1..=basis.len()).map(|k| (0..k).collect()).collect();
    subsets.extend((1..basis.len()).map(|i| vec![i]));

    let mut best: Option<SubsolutionCandidate> = None;
    let mut last_err = None;
    for active in subsets {
        let coeffs = match solve_lp(&cd, basis, &prep, &active, n, opts) {
            Ok(c) => c,
            Err(e @ (BoundsError::Unbounded | BoundsError::BudgetExhausted(_))) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(c) = certify(&cd, basis, coeffs, n, &reference_bound, opts)? {
            if best.as_ref().is_none_or(|b| c.certified_bound > b.certified_bound) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| {
        last_err.unwrap_or_else(|| {
            BoundsError::Infeasible(
                "no nonzero nonnegative combination of the basis is an admissible subsolution".into(),
            )
        })
    })
}

/// The case's own subsolution profile, the natural one-element basis.
pub fn standard_basis(case: Case) -> Result<Vec<ProfileFn>, BoundsError> {
    Ok(vec![CaseData::new(case).subsolution()?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Exponent;
    use num_traits::One;

    #[test]
    fn standard_basis_reproduces_assembly() {
        for (case, n) in [(Case::Nonumbilic, 9), (Case::Umbilic, 7), (Case::Nonumbilic, 11)] {
            let basis = standard_basis(case).unwrap();
            let c = optimize_subsolution(case, n, &basis, &OptimizeOptions::default()).unwrap();
            assert!(c.exact);
            assert_eq!(c.coefficients, vec![BigRational::one()]);
            assert_eq!(c.certified_bound, c.reference_bound, "{case} n = {n}");
        }
    }

    #[test]
    fn enlarged_basis_dominates() {
        let mut basis = standard_basis(Case::Nonumbilic).unwrap();
        basis.push(ProfileFn::s_pow(3).shift_power(Exponent::int(-2)));
        let c = optimize_subsolution(Case::Nonumbilic, 9, &basis, &OptimizeOptions::default()).unwrap();
        assert!(c.certified_bound >= c.reference_bound);
    }

    #[test]
    fn empty_basis_is_infeasible() {
        let err = optimize_subsolution(Case::Umbilic, 7, &[], &OptimizeOptions::default()).unwrap_err();
        assert!(matches!(err, BoundsError::Infeasible(_)));
    }

    #[test]
    fn nonzero_at_origin_is_rejected() {
        let err =
            optimize_subsolution(Case::Nonumbilic, 9, &[ProfileFn::one()], &OptimizeOptions::default()).unwrap_err();
        assert!(matches!(err, BoundsError::InvalidBasis { index: 0, .. }));
    }
}
