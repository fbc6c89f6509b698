//! Closed-form moments over `s ∈ [0, ∞)` and radial Beta moments
//! `∫₀^∞ r^p (1+r²)^{−m} dr`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::exactfn::{beta_unit, ExactError, RationalFn};

use super::{Exponent, ProfileError, ProfileFn};

/// `∫₀^∞ f(s) ds`, using `∫(1+s)^a = −1/(a+1)` and
/// `∫log(1+s)(1+s)^a = 1/(a+1)²`.
///
/// Every term must decay at least like `(1+s)^{−2}` for all large `n`.
pub fn moment_integral(f: &ProfileFn) -> Result<RationalFn, ProfileError> {
    let mut total = RationalFn::zero();
    for (&(a, log), c) in f.terms() {
        let decays = a.per_n < 0 || (a.per_n == 0 && a.offset <= -2);
        if !decays {
            return Err(ProfileError::NotIntegrable(f.render_key(&(a, log))));
        }
        let inv = (a + Exponent::int(1)).as_rational_fn().recip()?;
        total = if log { &total + &(c * &inv.pow(2)) } else { &total - &(c * &inv) };
    }
    Ok(total)
}

/// Which Beta value the coefficient of a [`RadialMoment`] multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialBase {
    /// `B((n−1)/2, (n+1)/2)`.
    Unit,
    /// `B(1/2, 1/2) = π`.
    Pi,
    /// A rational value; the coefficient is the whole moment.
    One,
}

/// `∫₀^∞ r^p (1+r²)^{−m} dr = coeff · base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialMoment {
    pub p: Exponent,
    pub m: Exponent,
    pub coeff: RationalFn,
    pub base: RadialBase,
}

impl RadialMoment {
    pub fn value(&self, n: i64) -> Result<f64, ExactError> {
        let base = match self.base {
            RadialBase::Unit => beta_unit(n)?,
            RadialBase::Pi => PI,
            RadialBase::One => 1.0,
        };
        Ok(self.coeff.eval_f64(n)? * base)
    }
}

/// Half of an affine exponent, `e/2`, as a rational function of `n`.
fn half(e: Exponent) -> RationalFn {
    &e.as_rational_fn() * &RationalFn::ratio(1, 2)
}

/// Moves `x` (twice-value `x2`) to `target2` by unit steps, multiplying `coeff`
/// by the Beta recurrence factors. `other` is the fixed second argument.
fn shift_arg(coeff: &mut RationalFn, x2: Exponent, target2: Exponent, other: &RationalFn) -> Result<(), ExactError> {
    let steps = (x2.offset - target2.offset) / 2;
    let mut x = half(x2);
    let one = RationalFn::one();
    for _ in 0..steps.abs() {
        if steps > 0 {
            // B(x, y) = (x−1)/(x+y−1) · B(x−1, y)
            let xm = &x - &one;
            *coeff = &*coeff * &xm.checked_div(&(&xm + other))?;
            x = xm;
        } else {
            // B(x, y) = (x+y)/x · B(x+1, y)
            *coeff = &*coeff * &(&x + other).checked_div(&x)?;
            x = &x + &one;
        }
    }
    Ok(())
}

pub fn radial_moment(p: Exponent, m: Exponent) -> Result<RadialMoment, ProfileError> {
    // ½ B(x, y) with 2x = p + 1 and 2y = 2m − p − 1.
    let x2 = p + Exponent::int(1);
    let y2 = m + m - x2;
    let mismatch = || ProfileError::RadialMismatch { x: half(x2).to_string(), y: half(y2).to_string() };
    for e in [x2, y2] {
        if e.per_n < 0 || (e.per_n == 0 && e.offset <= 0) {
            return Err(ProfileError::NotIntegrable(format!("r^({p}) (1+r^2)^(-({m}))")));
        }
    }
    let (tx, ty, base) = match (x2.per_n, y2.per_n) {
        (1, 1) => (Exponent::affine(1, -1), Exponent::affine(1, 1), RadialBase::Unit),
        (0, 0) => {
            // 2x + 2y = 2m is even, so both arguments are half-integers
            // (reducing to B(1/2, 1/2) = π) or both integers (B(1, 1) = 1).
            let base = if x2.offset % 2 == 1 { RadialBase::Pi } else { RadialBase::One };
            (Exponent::int(2 - x2.offset % 2), Exponent::int(2 - y2.offset % 2), base)
        }
        _ => return Err(mismatch()),
    };
    if (x2.offset - tx.offset) % 2 != 0 || (y2.offset - ty.offset) % 2 != 0 {
        return Err(mismatch());
    }
    let mut coeff = RationalFn::ratio(1, 2);
    // Move x first with y at its original value, then y with x at its target.
    shift_arg(&mut coeff, x2, tx, &half(y2))?;
    shift_arg(&mut coeff, y2, ty, &half(tx))?;
    Ok(RadialMoment { p, m, coeff, base })
}
