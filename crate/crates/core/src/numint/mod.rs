//! Numerical quadrature of the half-space integrals: closed-form integrands
//! by adaptive cubature, solved fields by grid quadrature.

mod adjoint;
mod constant;
mod field;
mod gk;
mod oracle;
mod quad2d;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::BoundsError;
use crate::exactfn::{beta_value, ExactError};
use crate::pde::PdeError;
use crate::profile::ProfileError;

pub use adjoint::{check_adjointness, standard_adjoint_pairs, AdjointPair, AdjointnessReport};
pub use constant::{compute_c_numeric, CRecord, NumericOptions, UNITS};
pub use field::{field_integral, FieldQuadrature};
pub use gk::{quad1d, quad1d_semi_infinite};
pub use oracle::{chain_integrals, h1_moment, ChainIntegral};
pub use quad2d::{cubature, quad2d, unit_factor, CubatureOptions, Interval, ReducedIntegrand};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumintError {
    #[error("tolerance not reached: estimate {estimate:e} > {tolerance:e} after {evaluations} evaluations")]
    ToleranceNotReached { estimate: f64, tolerance: f64, evaluations: usize },
    #[error("integrand does not decay at ({}, {}): tail ratio {ratio}", at[0], at[1])]
    DivergentTail { at: [f64; 2], ratio: f64 },
    #[error("non-finite integrand value at ({}, {})", at[0], at[1])]
    NonFinite { at: [f64; 2] },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Pde(#[from] PdeError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

impl From<ExactError> for NumintError {
    fn from(e: ExactError) -> Self {
        NumintError::Profile(ProfileError::Exact(e))
    }
}

/// Raw result of an adaptive rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    /// Coefficient of `ω_{n−2} B((n−1)/2, (n+1)/2)`.
    BetaUnits,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericConstant {
    pub value: f64,
    pub error: f64,
    pub normalization: Normalization,
    pub evaluations: usize,
}

impl NumericConstant {
    pub fn in_units(value: f64, error: f64, evaluations: usize) -> Self {
        NumericConstant { value, error, normalization: Normalization::BetaUnits, evaluations }
    }

    /// Converts to a raw number by multiplying with `ω_{n−2} B(…)`.
    pub fn to_raw(self, n: i64) -> Result<NumericConstant, NumintError> {
        match self.normalization {
            Normalization::Raw => Ok(self),
            Normalization::BetaUnits => {
                let b = beta_value(n)?;
                Ok(NumericConstant {
                    value: self.value * b,
                    error: self.error * b,
                    normalization: Normalization::Raw,
                    ..self
                })
            }
        }
    }

    /// Whether `[value − error, value + error]` meets `[lo, hi]`.
    pub fn meets(&self, lo: f64, hi: Option<f64>) -> bool {
        self.value + self.error >= lo && hi.is_none_or(|h| self.value - self.error <= h)
    }
}
