//! Dense integer polynomials in the dimension parameter `n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer-coefficient polynomial, coefficients stored in ascending degree.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and `degree` is well defined otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly::from_coeffs(vec![c.into()])
    }

    /// The monomial `n`.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    /// `a*n + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Poly::from_coeffs(vec![BigInt::from(b), BigInt::from(a)])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Returns the constant value when the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides every coefficient by `c`; panics in debug builds if inexact.
    fn div_scalar_exact(&self, c: &BigInt) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|a| {
                    let (q, r) = a.div_rem(c);
                    debug_assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        )
    }

    /// gcd of the coefficients, always nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Polynomial divided by its content, with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("pseudo_rem by zero polynomial");
        let Some(da) = self.degree() else {
            return Poly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.leading();
        let mut r = self.coeffs.clone();
        let mut steps = da - db + 1;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (k, bk) in b.coeffs.iter().enumerate() {
                r[dr - db + k] -= &lr * bk;
            }
            steps -= 1;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        let mut rem = Poly::from_coeffs(r);
        if steps > 0 {
            rem = rem.scale(&num_traits::pow(lb, steps));
        }
        rem
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// in `Z[n]`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let ds = self.degree()?;
        if ds < dd {
            return None;
        }
        let ld = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qk * dj;
            }
            q[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(q))
    }

    /// Primitive gcd via the subresultant polynomial remainder sequence.
    ///
    /// The result has positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive_part();
            }
            if r.degree() == Some(0) {
                return Poly::one();
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = r.div_scalar_exact(&divisor);
            g = a.leading();
            h = if delta == 0 {
                h
            } else {
                let num = num_traits::pow(g.clone(), delta);
                let den = num_traits::pow(h.clone(), delta - 1);
                num / den
            };
        }
    }

    pub fn eval_int(&self, n: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_rational(&self, n: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * n + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * n + bigint_to_f64(c))
    }

    /// Taylor shift: the polynomial `t ↦ p(t + a)`.
    pub fn shift(&self, a: &BigInt) -> Poly {
        let mut c = self.coeffs.clone();
        let len = c.len();
        for i in 0..len {
            for j in (i..len.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Poly::from_coeffs(c)
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

impl fmt::Display for Poly {
    /// Descending degree, explicit integer coefficients: `1*n^2 - 8*n - 5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*n")?,
                _ => write!(f, "{mag}*n^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
