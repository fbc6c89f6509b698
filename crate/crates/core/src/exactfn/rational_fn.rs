use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::ExactError;

/// Exact ratio of integer polynomials in `n`, kept in canonical form.
///
/// Canonical means: numerator and denominator share no nonconstant factor,
/// the combined integer content is 1, and the denominator's leading
/// coefficient is positive. Zero is `0 / 1`. Structural equality is therefore
/// value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFn { num: Poly::zero(), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g).expect("gcd divides numerator"), den.div_exact(&g).expect("gcd divides denominator"))
        } else {
            (num, den)
        };
        let mut c = num_integer::Integer::gcd(&num.content(), &den.content());
        if den.leading().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = Poly::from_coeffs(num.coeffs().iter().map(|a| a / &c).collect());
            den = Poly::from_coeffs(den.coeffs().iter().map(|a| a / &c).collect());
        }
        RationalFn { num, den }
    }

    pub fn zero() -> Self {
        RationalFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// `p / q` with integer `p`, `q`; panics on `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::new(Poly::constant(p), Poly::constant(q)).expect("nonzero denominator")
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::canonical(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone()))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::canonical(p, Poly::one())
    }

    /// The indeterminate `n`.
    pub fn n() -> Self {
        Self::from_poly(Poly::var())
    }

    /// `n + k`.
    pub fn n_plus(k: i64) -> Self {
        Self::from_poly(Poly::linear(1, k))
    }

    /// `a*n + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_poly(Poly::linear(a, b))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value when this is a constant function.
    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RationalFn) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZeroFunction);
        }
        Ok(Self::canonical(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Exact value at integer `n`.
    pub fn eval(&self, n: i64) -> Result<BigRational, ExactError> {
        let x = BigInt::from(n);
        let d = self.den.eval_int(&x);
        if d.is_zero() {
            return Err(ExactError::Pole { n });
        }
        Ok(BigRational::new(self.num.eval_int(&x), d))
    }

    pub fn eval_f64(&self, n: i64) -> Result<f64, ExactError> {
        let q = self.eval(n)?;
        Ok(rational_to_f64(&q))
    }

    /// Sign of the value at `n`, or a pole error.
    pub fn sign_at(&self, n: i64) -> Result<Sign, ExactError> {
        let v = self.eval(n)?;
        Ok(Sign::of(&v))
    }

    /// Certificate that `self(n) > 0` for every real `n ≥ n0`: after the
    /// substitution `n = n0 + t`, numerator and denominator each have
    /// coefficients of a single strict sign pattern (all nonnegative with a
    /// positive constant term, or the negation), and the two signs agree.
    pub fn positive_for_all_ge(&self, n0: i64) -> bool {
        let a = BigInt::from(n0);
        let num = self.num.shift(&a);
        let den = self.den.shift(&a);
        match (uniform_sign(&num), uniform_sign(&den)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Applies an arithmetic operator; `Div` by the zero function is an error.
    pub fn apply(&self, op: ArithOp, other: &RationalFn) -> Result<Self, ExactError> {
        Ok(match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
            ArithOp::Div => self.checked_div(other)?,
        })
    }
}

/// Sign of all coefficients of `p` when they share one (zeros allowed, but
/// the constant term must be nonzero so the value at `t = 0` is strict).
fn uniform_sign(p: &Poly) -> Option<i8> {
    let c0 = p.coeff(0);
    if c0.is_zero() {
        return None;
    }
    let s = if c0.is_positive() { 1 } else { -1 };
    let ok = p.coeffs().iter().all(|c| c.is_zero() || (c.is_positive() == (s == 1)));
    ok.then_some(s)
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn of(q: &BigRational) -> Sign {
        if q.is_zero() {
            Sign::Zero
        } else if q.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        }
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        RationalFn::canonical(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: RationalFn) -> RationalFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: &RationalFn) -> RationalFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

impl std::ops::Div for &RationalFn {
    type Output = RationalFn;
    /// Panics on division by the zero function; use `checked_div` otherwise.
    fn div(self, rhs: &RationalFn) -> RationalFn {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl std::ops::Div for RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: RationalFn) -> RationalFn {
        &self / &rhs
    }
}

impl std::iter::Sum for RationalFn {
    fn sum<I: Iterator<Item = RationalFn>>(iter: I) -> Self {
        iter.fold(RationalFn::zero(), |a, b| a + b)
    }
}

impl fmt::Display for RationalFn {
    /// Canonical string `(P) / (Q)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn[{self}]")
    }
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for RationalFn {
    type Err = ExactError;

    /// Accepts the canonical `(P) / (Q)` form, a bare polynomial `P`, or an
    /// integer ratio such as `-3/7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = PolyParser::new(s);
        let r = p.rational_fn()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(r)
    }
}

/// Recursive-descent reader for polynomials in `n` and their ratios.
pub(crate) struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> PolyParser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        PolyParser { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ExactError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    pub(crate) fn eat_str(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, msg: &str) -> ExactError {
        ExactError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse as integer"))
    }

    fn small_integer(&mut self) -> Result<u32, ExactError> {
        let at = self.pos;
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| ExactError::Parse { pos: at, msg: "exponent too large".into() })
    }

    /// `P` or `P / Q`, where `P` is a polynomial expression and `Q` a single
    /// factor (an integer, `n`, or a parenthesized expression, optionally
    /// raised to a power).
    pub(crate) fn rational_fn(&mut self) -> Result<RationalFn, ExactError> {
        let num = self.poly()?;
        self.skip_ws();
        if self.eat('/') {
            let den_pos = self.pos;
            let den = self.factor()?;
            RationalFn::new(num, den).map_err(|_| ExactError::Parse { pos: den_pos, msg: "zero denominator".into() })
        } else {
            Ok(RationalFn::from_poly(num))
        }
    }

    /// Polynomial expression: sums, differences, products, integer powers
    /// and parentheses over integers and `n`.
    pub(crate) fn poly(&mut self) -> Result<Poly, ExactError> {
        let mut acc = Poly::zero();
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.product()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly, ExactError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ExactError> {
        self.skip_ws();
        let base = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            Poly::constant(self.integer()?)
        } else if self.eat('n') {
            Poly::var()
        } else if self.eat('(') {
            let p = self.poly()?;
            self.expect(')')?;
            p
        } else {
            return Err(self.error("expected 'n' or an integer"));
        };
        if self.eat('^') {
            Ok(base.pow(self.small_integer()?))
        } else {
            Ok(base)
        }
    }
}
