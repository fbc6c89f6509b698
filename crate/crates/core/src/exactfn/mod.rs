//! Exact arithmetic over rational functions of the dimension `n`, and the
//! Beta/sphere-volume normalization in which every bound constant is
//! expressed.

mod beta;
mod poly;
mod rational_fn;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use beta::{beta_unit, beta_value, ln_gamma, sphere_volume};
pub use poly::Poly;
pub use rational_fn::{ArithOp, RationalFn, Sign};

pub(crate) use rational_fn::{rational_to_f64, PolyParser};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("pole at n = {n}")]
    Pole { n: i64 },
    #[error("dimension n = {n} outside the domain (n >= {min} required)")]
    Domain { n: i64, min: i64 },
    #[error("invalid dimension range [{lo}, {hi}]")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A constant of the form `coeff(n) · ω_{n−2} · B((n−1)/2, (n+1)/2)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BetaConstant {
    pub coeff: RationalFn,
}

impl BetaConstant {
    pub fn new(coeff: RationalFn) -> Self {
        BetaConstant { coeff }
    }

    pub fn zero() -> Self {
        BetaConstant { coeff: RationalFn::zero() }
    }

    /// Numeric value at integer `n ≥ 3`.
    pub fn value(&self, n: i64) -> Result<f64, ExactError> {
        Ok(self.coeff.eval_f64(n)? * beta_value(n)?)
    }
}

impl std::ops::Add for &BetaConstant {
    type Output = BetaConstant;
    fn add(self, rhs: &BetaConstant) -> BetaConstant {
        BetaConstant::new(&self.coeff + &rhs.coeff)
    }
}

impl fmt::Display for BetaConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] * omega_(n-2) * B((n-1)/2, (n+1)/2)", self.coeff)
    }
}

impl fmt::Debug for BetaConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BetaConstant({})", self.coeff)
    }
}

/// Closed integer range of dimensions, `3 ≤ lo ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRange {
    lo: i64,
    hi: i64,
}

impl DimensionRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self, ExactError> {
        if lo < 3 || hi < lo {
            return Err(ExactError::InvalidRange { lo, hi });
        }
        Ok(DimensionRange { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for DimensionRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Outcome of evaluating a rational function at one dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanEntry {
    Sign(Sign),
    Pole,
}

impl ScanEntry {
    pub fn label(self) -> &'static str {
        match self {
            ScanEntry::Sign(s) => s.symbol(),
            ScanEntry::Pole => "pole",
        }
    }
}

/// Sign of `a` at every integer of `range`; poles are reported in-band.
pub fn sign_scan(a: &RationalFn, range: DimensionRange) -> Vec<(i64, ScanEntry)> {
    range
        .iter()
        .map(|n| {
            let e = match a.sign_at(n) {
                Ok(s) => ScanEntry::Sign(s),
                Err(_) => ScanEntry::Pole,
            };
            (n, e)
        })
        .collect()
}
