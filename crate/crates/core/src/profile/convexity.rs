//! Per-dimension convexity certification of profiles by sampling `f″` on a
//! geometric grid together with its exact sign at `s = 0` and as `s → ∞`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::exactfn::{ExactError, Sign};

use super::ProfileFn;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Convexity {
    Convex,
    NonConvex { witness: f64, value: f64 },
    Inconclusive { reason: String },
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, Convexity::Convex)
    }
}

/// `{0} ∪ {2^k · 10⁻³ : k = 0..40}`.
pub fn certification_samples() -> Vec<f64> {
    std::iter::once(0.0).chain((0..=40).map(|k| 1e-3 * f64::powi(2.0, k))).collect()
}

/// Relative roundoff allowance for a sampled `f″` against its term scale.
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

pub fn convexity_certificate(f: &ProfileFn, n: i64) -> Result<Convexity, ExactError> {
    let f2 = f.derivative().derivative();
    let num = f2.at(n)?;

    let at_zero = Sign::of(&f2.value_at_zero().eval(n)?);
    if at_zero == Sign::Negative {
        return Ok(Convexity::NonConvex { witness: 0.0, value: num.eval(0.0) });
    }

    // Leading behaviour as s → ∞: largest exponent at this n, log dominating.
    let mut leading = None;
    for (&(a, log), c) in f2.terms() {
        let v = c.eval(n)?;
        if v.is_zero() {
            continue;
        }
        let key = (a.at(n), log);
        if leading.as_ref().is_none_or(|(k, _)| key > *k) {
            leading = Some((key, v));
        }
    }
    let tail_negative = leading.as_ref().is_some_and(|(_, v)| v.is_negative());

    let mut near_zero = None;
    for s in certification_samples() {
        let (v, scale) = num.eval_with_scale(s);
        if v < -ROUNDOFF * scale {
            return Ok(Convexity::NonConvex { witness: s, value: v });
        }
        if v < 0.0 && near_zero.is_none() {
            near_zero = Some(s);
        }
    }

    if tail_negative {
        let mut s = 2.0 * certification_samples().last().copied().unwrap_or(1.0);
        while s.is_finite() {
            let (v, scale) = num.eval_with_scale(s);
            if v < -ROUNDOFF * scale {
                return Ok(Convexity::NonConvex { witness: s, value: v });
            }
            s *= 2.0;
        }
        return Ok(Convexity::Inconclusive {
            reason: "f'' is eventually negative but no finite witness was resolved".into(),
        });
    }
    if let Some(s) = near_zero {
        return Ok(Convexity::Inconclusive { reason: format!("f'' is negative within roundoff at s = {s}") });
    }
    Ok(Convexity::Convex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfn::RationalFn;
    use crate::profile::{ode_solve, Exponent};

    #[test]
    fn sample_grid_shape() {
        let s = certification_samples();
        assert_eq!(s.len(), 42);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[1], 1e-3);
        assert!((s[41] - 1e-3 * 2f64.powi(40)).abs() < 1.0);
    }

    #[test]
    fn first_profile_is_convex_at_nine() {
        let f = ProfileFn::s_pow(2).shift_power(Exponent::int(-1)).scale(&"1 / (4*n)".parse::<RationalFn>().unwrap());
        assert_eq!(convexity_certificate(&f, 9).unwrap(), Convexity::Convex);
    }

    #[test]
    fn negative_square_has_witness() {
        let f = -&ProfileFn::s_pow(2);
        assert!(matches!(convexity_certificate(&f, 9).unwrap(), Convexity::NonConvex { .. }));
    }

    #[test]
    fn cubic_log_profile_is_convex_at_seven() {
        let h1 = ode_solve(&RationalFn::n_plus(2), &ProfileFn::s_pow(3)).unwrap();
        assert_eq!(convexity_certificate(&h1, 7).unwrap(), Convexity::Convex);
    }

    #[test]
    fn eventual_concavity_gets_finite_witness() {
        // f'' = 1 − (1+s)·1e-9 turns negative only far out.
        let f = &ProfileFn::s_pow(2).scale(&RationalFn::ratio(1, 2))
            - &ProfileFn::power(Exponent::int(3)).scale(&RationalFn::ratio(1, 6_000_000_000));
        match convexity_certificate(&f, 9).unwrap() {
            Convexity::NonConvex { witness, value } => assert!(witness > 1e8 && value < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pole_is_an_error() {
        let f = ProfileFn::s_pow(2).scale(&"1 / (n - 9)".parse::<RationalFn>().unwrap());
        assert!(convexity_certificate(&f, 9).is_err());
    }
}
