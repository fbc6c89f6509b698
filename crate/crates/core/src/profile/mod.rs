//! Exact symbolic calculus for one-dimensional profiles `f(s)`, `s ≥ 0`.
//!
//! A [`ProfileFn`] is a finite sum of terms `c(n) · (1+s)^a · [log(1+s)]`
//! where `c` is a [`RationalFn`] and the exponent `a = k·n + c₀` is affine in
//! the dimension with integer coefficients. Polynomials in `s` are stored in
//! the `(1+s)` basis, which keeps the class closed under differentiation,
//! the integrating factor of the profile ODEs, and the moment formulas.

mod convexity;
mod kernel;
mod moments;
mod ode;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactfn::{ExactError, Poly, PolyParser, RationalFn};

pub use convexity::{certification_samples, convexity_certificate, Convexity};
pub use kernel::{KernelProfile, NumericKernel};
pub use moments::{moment_integral, radial_moment, RadialBase, RadialMoment};
pub use ode::{neg_laplacian_bracket, ode_residual, ode_solve, LaplacianBracket};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("product produces a log² term: {0}")]
    LogSquared(String),
    #[error("antiderivative leaves the profile class at term {0}")]
    Inexpressible(String),
    #[error("degenerate ODE: alpha is identically zero")]
    DegenerateAlpha,
    #[error("exponent {0} is not an integer-affine function of n")]
    NonIntegralExponent(String),
    #[error("term {0} is not integrable on [0, ∞) for generic n")]
    NotIntegrable(String),
    #[error("Beta arguments B({x}, {y}) cannot be reduced to B((n-1)/2, (n+1)/2)")]
    RadialMismatch { x: String, y: String },
    #[error("ODE substitution residual is nonzero: {0}")]
    ResidualNonzero(String),
    #[error("kernel power {0} is odd; no integer radial moment")]
    OddKernel(String),
}

/// Exponent `per_n · n + offset` of `(1+s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub per_n: i64,
    pub offset: i64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { per_n: 0, offset: 0 };

    pub const fn int(offset: i64) -> Self {
        Exponent { per_n: 0, offset }
    }

    pub const fn affine(per_n: i64, offset: i64) -> Self {
        Exponent { per_n, offset }
    }

    pub fn at(self, n: i64) -> i64 {
        self.per_n * n + self.offset
    }

    pub fn as_rational_fn(self) -> RationalFn {
        RationalFn::linear(self.per_n, self.offset)
    }

    /// Converts a rational function to an exponent when it is `k·n + c` with
    /// integer `k`, `c`.
    pub fn from_rational_fn(r: &RationalFn) -> Option<Exponent> {
        let den = r.denom().as_constant()?;
        let num = r.numer();
        if num.degree().unwrap_or(0) > 1 {
            return None;
        }
        let exact = |c: BigInt| -> Option<i64> {
            let (q, rem) = num_integer::Integer::div_rem(&c, &den);
            rem.is_zero().then(|| q.to_i64()).flatten()
        };
        Some(Exponent { per_n: exact(num.coeff(1))?, offset: exact(num.coeff(0))? })
    }

    pub fn is_minus_one(self) -> bool {
        self.per_n == 0 && self.offset == -1
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent { per_n: self.per_n + o.per_n, offset: self.offset + o.offset }
    }
}

impl std::ops::Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent { per_n: -self.per_n, offset: -self.offset }
    }
}

impl std::ops::Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        self + (-o)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly::linear(self.per_n, self.offset))
    }
}

/// Key of a canonical term: exponent and whether a `log(1+s)` factor is present.
pub type TermKey = (Exponent, bool);

/// Exact profile in the canonical `(1+s)` basis. See the module docs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ProfileFn {
    terms: BTreeMap<TermKey, RationalFn>,
}

impl ProfileFn {
    pub fn zero() -> Self {
        ProfileFn::default()
    }

    pub fn constant(c: RationalFn) -> Self {
        ProfileFn::term(c, Exponent::ZERO, false)
    }

    pub fn one() -> Self {
        ProfileFn::constant(RationalFn::one())
    }

    pub fn term(c: RationalFn, a: Exponent, log: bool) -> Self {
        let mut p = ProfileFn::zero();
        p.add_term(c, a, log);
        p
    }

    /// `(1+s)^a`.
    pub fn power(a: Exponent) -> Self {
        ProfileFn::term(RationalFn::one(), a, false)
    }

    /// `(1+s)^a · log(1+s)`.
    pub fn log_power(a: Exponent) -> Self {
        ProfileFn::term(RationalFn::one(), a, true)
    }

    /// `s^k`, expanded binomially in the `(1+s)` basis.
    pub fn s_pow(k: u32) -> Self {
        let mut p = ProfileFn::zero();
        let mut binom = BigInt::from(1);
        for j in 0..=k {
            // C(k, j) (1+s)^{k-j} (-1)^j
            let sign = if j % 2 == 0 { 1 } else { -1 };
            p.add_term(RationalFn::from_bigint(&binom * sign), Exponent::int((k - j) as i64), false);
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
        p
    }

    fn add_term(&mut self, c: RationalFn, a: Exponent, log: bool) {
        if c.is_zero() {
            return;
        }
        let key = (a, log);
        let sum = match self.terms.remove(&key) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&TermKey, &RationalFn)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: Exponent, log: bool) -> RationalFn {
        self.terms.get(&(a, log)).cloned().unwrap_or_else(RationalFn::zero)
    }

    pub fn has_log(&self) -> bool {
        self.terms.keys().any(|(_, l)| *l)
    }

    pub fn scale(&self, c: &RationalFn) -> Self {
        let mut out = ProfileFn::zero();
        for (&(a, l), k) in &self.terms {
            out.add_term(k * c, a, l);
        }
        out
    }

    /// Multiplication by `(1+s)^b`.
    pub fn shift_power(&self, b: Exponent) -> Self {
        ProfileFn { terms: self.terms.iter().map(|(&(a, l), c)| ((a + b, l), c.clone())).collect() }
    }

    pub fn checked_mul(&self, other: &ProfileFn) -> Result<Self, ProfileError> {
        let mut out = ProfileFn::zero();
        for (&(a, la), ca) in &self.terms {
            for (&(b, lb), cb) in &other.terms {
                if la && lb {
                    return Err(ProfileError::LogSquared(format!(
                        "{} x {}",
                        render_term(ca, a, la),
                        render_term(cb, b, lb)
                    )));
                }
                out.add_term(ca * cb, a + b, la || lb);
            }
        }
        Ok(out)
    }

    /// Exact `d/ds`.
    pub fn derivative(&self) -> Self {
        let mut out = ProfileFn::zero();
        for (&(a, log), c) in &self.terms {
            let a_rf = a.as_rational_fn();
            let lowered = a + Exponent::int(-1);
            if log {
                // d/ds[(1+s)^a log(1+s)] = a (1+s)^{a-1} log(1+s) + (1+s)^{a-1}
                out.add_term(c * &a_rf, lowered, true);
                out.add_term(c.clone(), lowered, false);
            } else {
                out.add_term(c * &a_rf, lowered, false);
            }
        }
        out
    }

    /// Exact value at `s = 0` (every `log(1+0)` vanishes).
    pub fn value_at_zero(&self) -> RationalFn {
        self.terms.iter().filter(|((_, l), _)| !l).map(|(_, c)| c.clone()).sum()
    }

    /// Coefficients specialized to the integer dimension `n`.
    pub fn at(&self, n: i64) -> Result<NumericProfile, ExactError> {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, l), c)| {
                let e = i32::try_from(a.at(n)).expect("exponent fits in i32");
                Ok((c.eval_f64(n)?, e, l))
            })
            .collect::<Result<Vec<_>, ExactError>>()?;
        Ok(NumericProfile { terms })
    }

    pub fn eval(&self, s: f64, n: i64) -> Result<f64, ExactError> {
        Ok(self.at(n)?.eval(s))
    }

    /// Exact value at dimension `n`, with `1+s = t` and `log(1+s)` replaced by
    /// the given rational `log_t`. Profiles that agree symbolically agree
    /// exactly under any fixed choice of `log_t`.
    pub fn eval_exact(&self, n: i64, t: &BigRational, log_t: &BigRational) -> Result<BigRational, ExactError> {
        let mut acc = BigRational::zero();
        for (&(a, log), c) in &self.terms {
            let e = i32::try_from(a.at(n)).expect("exponent fits in i32");
            let mut term = c.eval(n)? * num_traits::pow::Pow::pow(t, e);
            if log {
                term *= log_t;
            }
            acc += term;
        }
        Ok(acc)
    }

    pub(crate) fn render_key(&self, key: &TermKey) -> String {
        let c = self.terms.get(key).cloned().unwrap_or_else(RationalFn::zero);
        render_term(&c, key.0, key.1)
    }
}

fn render_term(c: &RationalFn, a: Exponent, log: bool) -> String {
    let mut s = format!("[{c}] * (1+s)^({a})");
    if log {
        s.push_str(" * log(1+s)");
    }
    s
}

impl std::ops::Add for &ProfileFn {
    type Output = ProfileFn;
    fn add(self, rhs: &ProfileFn) -> ProfileFn {
        let mut out = self.clone();
        for (&(a, l), c) in &rhs.terms {
            out.add_term(c.clone(), a, l);
        }
        out
    }
}

impl std::ops::Sub for &ProfileFn {
    type Output = ProfileFn;
    fn sub(self, rhs: &ProfileFn) -> ProfileFn {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &ProfileFn {
    type Output = ProfileFn;
    fn neg(self) -> ProfileFn {
        ProfileFn { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl std::ops::Add for ProfileFn {
    type Output = ProfileFn;
    fn add(self, rhs: ProfileFn) -> ProfileFn {
        &self + &rhs
    }
}

impl std::ops::Sub for ProfileFn {
    type Output = ProfileFn;
    fn sub(self, rhs: ProfileFn) -> ProfileFn {
        &self - &rhs
    }
}

impl fmt::Display for ProfileFn {
    /// Canonical text: terms in descending `(exponent, log)` order joined by
    /// ` + `, each rendered as `[c] * (1+s)^(a)` with an optional
    /// ` * log(1+s)` suffix. The zero profile is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(&(a, l), c)| render_term(c, a, l)).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for ProfileFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProfileFn[{self}]")
    }
}

impl FromStr for ProfileFn {
    type Err = ExactError;

    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let mut p = PolyParser::new(src);
        p.skip_ws();
        if p.eat('0') {
            p.skip_ws();
            if p.at_end() {
                return Ok(ProfileFn::zero());
            }
            return Err(p.error("unexpected input after 0"));
        }
        let mut out = ProfileFn::zero();
        loop {
            p.expect('[')?;
            let c = p.rational_fn()?;
            p.expect(']')?;
            p.expect('*')?;
            if !p.eat_str("(1+s)^(") {
                return Err(p.error("expected '(1+s)^('"));
            }
            let at = p.pos();
            let e = p.poly()?;
            let a = Exponent::from_rational_fn(&RationalFn::from_poly(e))
                .ok_or(ExactError::Parse { pos: at, msg: "exponent must be k*n + c".into() })?;
            p.expect(')')?;
            let log = if p.eat('*') {
                if !p.eat_str("log(1+s)") {
                    return Err(p.error("expected 'log(1+s)'"));
                }
                true
            } else {
                false
            };
            if out.terms.contains_key(&(a, log)) {
                return Err(p.error("duplicate term"));
            }
            out.add_term(c, a, log);
            p.skip_ws();
            if p.at_end() {
                return Ok(out);
            }
            p.expect('+')?;
        }
    }
}

/// A profile with coefficients evaluated at a fixed dimension.
#[derive(Clone, Debug)]
pub struct NumericProfile {
    terms: Vec<(f64, i32, bool)>,
}

impl NumericProfile {
    pub fn eval(&self, s: f64) -> f64 {
        self.eval_with_scale(s).0
    }

    /// Value and the sum of absolute term magnitudes (a rounding scale).
    pub fn eval_with_scale(&self, s: f64) -> (f64, f64) {
        let t = 1.0 + s;
        let lt = t.ln();
        let mut v = 0.0;
        let mut scale = 0.0;
        for &(c, e, log) in &self.terms {
            let mut x = c * t.powi(e);
            if log {
                x *= lt;
            }
            v += x;
            scale += x.abs();
        }
        (v, scale)
    }

    /// Dominant term as `s → ∞`: largest exponent, log beating no-log.
    pub fn leading_term(&self) -> Option<(f64, i32, bool)> {
        self.terms.iter().filter(|(c, _, _)| *c != 0.0).max_by_key(|(_, e, l)| (*e, *l)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFn {
        s.parse().unwrap()
    }

    #[test]
    fn s_powers_in_shifted_basis() {
        let s2 = ProfileFn::s_pow(2);
        assert_eq!(s2.coeff(Exponent::int(2), false), RationalFn::one());
        assert_eq!(s2.coeff(Exponent::int(1), false), RationalFn::from_int(-2));
        assert_eq!(s2.coeff(Exponent::int(0), false), RationalFn::one());
        assert!((s2.eval(3.0, 9).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_of_basic_terms() {
        let sq = ProfileFn::power(Exponent::int(2));
        assert_eq!(sq.derivative(), ProfileFn::power(Exponent::int(1)).scale(&RationalFn::from_int(2)));
        let lg = ProfileFn::log_power(Exponent::ZERO);
        assert_eq!(lg.derivative(), ProfileFn::power(Exponent::int(-1)));
    }

    #[test]
    fn derivative_of_first_profile() {
        // s²/(4n(1+s)) = (1/(4n))[(1+s) − 2 + (1+s)^{−1}]
        let c = rf("1 / (4*n)");
        let f = ProfileFn::s_pow(2).shift_power(Exponent::int(-1)).scale(&c);
        let expect = (&ProfileFn::one() - &ProfileFn::power(Exponent::int(-2))).scale(&c);
        assert_eq!(f.derivative(), expect);
    }

    #[test]
    fn log_squared_is_rejected() {
        let l = ProfileFn::log_power(Exponent::ZERO);
        assert!(matches!(l.checked_mul(&l), Err(ProfileError::LogSquared(_))));
    }

    #[test]
    fn canonical_text_round_trip() {
        let f = &ProfileFn::s_pow(3).shift_power(Exponent::affine(-1, -2)).scale(&rf("3 / (n - 1)"))
            + &ProfileFn::log_power(Exponent::int(-1)).scale(&rf("-2"));
        let text = f.to_string();
        let back: ProfileFn = text.parse().unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_string(), text);
    }

    #[test]
    fn malformed_text_reports_position() {
        let err = "[1] * (1+s)^(2) + [2 * (1+s)^(1)".parse::<ProfileFn>().unwrap_err();
        assert!(matches!(err, ExactError::Parse { pos, .. } if pos > 18), "{err:?}");
    }

    #[test]
    fn exponent_from_rational_fn() {
        assert_eq!(Exponent::from_rational_fn(&rf("(n + 2 - n) / (2)")), Some(Exponent::int(1)));
        assert_eq!(Exponent::from_rational_fn(&rf("(n - 1) / (2)")), None);
        assert_eq!(Exponent::from_rational_fn(&rf("-n - 2")), Some(Exponent::affine(-1, -2)));
    }
}
