//! Integrating-factor solution of the profile ODEs and the bracket form of
//! the reduced negative Laplacian applied to `f(s)·ρ^{−α/2}`,
//! `ρ = r² + (1+s)²`.

use crate::exactfn::{ExactError, RationalFn};

use super::{Exponent, NumericProfile, ProfileError, ProfileFn};

/// `−Δ[f(s) ρ^{−α/2}] = [A(s) − B(s) ρ] ρ^{−(α+2)/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianBracket {
    pub a: ProfileFn,
    pub b: ProfileFn,
    pub alpha: RationalFn,
}

impl LaplacianBracket {
    /// Pointwise value of `−Δφ` at dimension `n`.
    pub fn eval(&self, r: f64, s: f64, n: i64) -> Result<f64, ExactError> {
        let a = self.a.at(n)?;
        let b = self.b.at(n)?;
        let alpha = self.alpha.eval_f64(n)?;
        Ok(eval_bracket(&a, &b, alpha, r, s))
    }
}

pub(crate) fn eval_bracket(a: &NumericProfile, b: &NumericProfile, alpha: f64, r: f64, s: f64) -> f64 {
    let rho = r * r + (1.0 + s) * (1.0 + s);
    (a.eval(s) - b.eval(s) * rho) * rho.powf(-(alpha + 2.0) / 2.0)
}

fn ode_weight(alpha: &RationalFn) -> RationalFn {
    alpha * &(&RationalFn::n_plus(2) - alpha)
}

/// `α(n+2−α) f + 2α(1+s) f′`.
fn ode_lhs(alpha: &RationalFn, f: &ProfileFn) -> ProfileFn {
    let drift = f.derivative().shift_power(Exponent::int(1)).scale(&(alpha * &RationalFn::from_int(2)));
    &f.scale(&ode_weight(alpha)) + &drift
}

pub fn neg_laplacian_bracket(f: &ProfileFn, alpha: &RationalFn) -> LaplacianBracket {
    LaplacianBracket { a: ode_lhs(alpha, f), b: f.derivative().derivative(), alpha: alpha.clone() }
}

/// `α(n+2−α) f + 2α(1+s) f′ − g`.
pub fn ode_residual(alpha: &RationalFn, f: &ProfileFn, g: &ProfileFn) -> ProfileFn {
    &ode_lhs(alpha, f) - g
}

/// Solves `α(n+2−α) f + 2α(1+s) f′ = g`, `f(0) = 0`, via
/// `f = (1+s)^{−β} ∫₀^s (1+t)^{β−1} g(t) dt / (2α)` with `β = (n+2−α)/2`.
pub fn ode_solve(alpha: &RationalFn, g: &ProfileFn) -> Result<ProfileFn, ProfileError> {
    if alpha.is_zero() {
        return Err(ProfileError::DegenerateAlpha);
    }
    let beta_rf = (&RationalFn::n_plus(2) - alpha) * RationalFn::ratio(1, 2);
    let beta =
        Exponent::from_rational_fn(&beta_rf).ok_or_else(|| ProfileError::NonIntegralExponent(beta_rf.to_string()))?;
    let two_alpha = alpha * &RationalFn::from_int(2);
    let integrand = g.shift_power(beta + Exponent::int(-1)).scale(&two_alpha.recip()?);
    let prim = antiderivative(&integrand)?;
    let f = (&prim - &ProfileFn::constant(prim.value_at_zero())).shift_power(-beta);
    let residual = ode_residual(alpha, &f, g);
    if !residual.is_zero() {
        return Err(ProfileError::ResidualNonzero(residual.to_string()));
    }
    Ok(f)
}

/// Term-wise antiderivative in the profile class.
pub(crate) fn antiderivative(h: &ProfileFn) -> Result<ProfileFn, ProfileError> {
    let mut out = ProfileFn::zero();
    for (&(a, log), c) in h.terms() {
        let raised = a + Exponent::int(1);
        if a.is_minus_one() {
            if log {
                return Err(ProfileError::Inexpressible(h.render_key(&(a, log))));
            }
            out = &out + &ProfileFn::log_power(Exponent::ZERO).scale(c);
            continue;
        }
        let inv = raised.as_rational_fn().recip()?;
        if log {
            // ∫(1+t)^a log(1+t) = (1+t)^{a+1} log(1+t)/(a+1) − (1+t)^{a+1}/(a+1)²
            out = &out + &ProfileFn::log_power(raised).scale(&(c * &inv));
            out = &out - &ProfileFn::power(raised).scale(&(c * &inv.pow(2)));
        } else {
            out = &out + &ProfileFn::power(raised).scale(&(c * &inv));
        }
    }
    Ok(out)
}
