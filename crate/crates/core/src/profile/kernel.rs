//! Axisymmetric kernels `G(s) · ρ^{−k/2}` on the half space and their
//! `x₁⁴`-weighted integrals in units of `ω_{n−2} B((n−1)/2, (n+1)/2)`.

use std::fmt;

use crate::exactfn::{BetaConstant, ExactError, RationalFn};

use super::{moment_integral, radial_moment, Exponent, NumericProfile, ProfileError, ProfileFn, RadialBase};

/// `profile(s) · ρ^{−power/2}` with `ρ = |x′|² + (1+x_n)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelProfile {
    pub profile: ProfileFn,
    pub power: Exponent,
}

impl KernelProfile {
    pub fn new(profile: ProfileFn, power: Exponent) -> Self {
        KernelProfile { profile, power }
    }

    pub fn checked_mul(&self, other: &KernelProfile) -> Result<KernelProfile, ProfileError> {
        Ok(KernelProfile { profile: self.profile.checked_mul(&other.profile)?, power: self.power + other.power })
    }

    pub fn scale(&self, c: &RationalFn) -> KernelProfile {
        KernelProfile { profile: self.profile.scale(c), power: self.power }
    }

    pub fn at(&self, n: i64) -> Result<NumericKernel, ExactError> {
        Ok(NumericKernel { profile: self.profile.at(n)?, half_power: self.power.at(n) as f64 / 2.0 })
    }

    /// `∫_{R^n_+} G(x_n) ρ^{−m} x₁⁴ dx` with `m = power/2`, as a coefficient
    /// of `ω_{n−2} B((n−1)/2, (n+1)/2)`.
    ///
    /// Polar coordinates in `x′ ∈ R^{n−1}` give the angular factor
    /// `3ω_{n−2}/((n−1)(n+1))`; the substitution `r = (1+s)t` splits the rest
    /// into `∫₀^∞ G(s)(1+s)^{n+3−2m} ds · ∫₀^∞ t^{n+2}(1+t²)^{−m} dt`.
    pub fn x1_quartic_integral(&self) -> Result<BetaConstant, ProfileError> {
        if self.power.per_n % 2 != 0 || self.power.offset % 2 != 0 {
            return Err(ProfileError::OddKernel(self.power.to_string()));
        }
        let m = Exponent::affine(self.power.per_n / 2, self.power.offset / 2);
        let p = Exponent::affine(1, 2);
        let radial = radial_moment(p, m)?;
        if radial.base != RadialBase::Unit {
            return Err(ProfileError::RadialMismatch { x: p.to_string(), y: m.to_string() });
        }
        let s_part = moment_integral(&self.profile.shift_power(Exponent::affine(1, 3) - m - m))?;
        let angular: RationalFn = "3 / ((n - 1)*(n + 1))".parse().expect("valid literal");
        Ok(BetaConstant::new(&(&angular * &s_part) * &radial.coeff))
    }
}

impl fmt::Display for KernelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * rho^(-({})/2)", self.profile, self.power)
    }
}

/// A kernel specialized to a fixed dimension.
#[derive(Clone, Debug)]
pub struct NumericKernel {
    profile: NumericProfile,
    half_power: f64,
}

impl NumericKernel {
    pub fn eval(&self, r: f64, s: f64) -> f64 {
        let rho = r * r + (1.0 + s) * (1.0 + s);
        self.profile.eval(s) * rho.powf(-self.half_power)
    }

    pub fn profile(&self) -> &NumericProfile {
        &self.profile
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFn {
        s.parse().unwrap()
    }

    #[test]
    fn linear_main_term_of_first_bound() {
        // s² ρ^{−(n+4)/2} times s²/(4n(1+s)) ρ^{−n/2}
        let w = KernelProfile::new(ProfileFn::s_pow(2), Exponent::affine(1, 4));
        let f = ProfileFn::s_pow(2).shift_power(Exponent::int(-1)).scale(&rf("1 / (4*n)"));
        let v = KernelProfile::new(f, Exponent::affine(1, 0));
        let got = w.checked_mul(&v).unwrap().x1_quartic_integral().unwrap();
        let expect = rf("9 / (4*(n + 1)^2*n^3*(n - 1)*(n - 2)*(n - 3))");
        assert_eq!(got.coeff, expect);
    }

    #[test]
    fn odd_power_is_rejected() {
        let k = KernelProfile::new(ProfileFn::one(), Exponent::affine(1, 1));
        assert!(matches!(k.x1_quartic_integral(), Err(ProfileError::OddKernel(_))));
    }
}
